#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzymatch/eval.hpp"
#include "fuzzymatch/types.hpp"

namespace fuzzymatch::io {

// Pairs CSV: RFC 4180, header required, columns `left`, `right` and optional
// `label` matched case-insensitively; other columns are ignored. Quoted fields
// are kept byte-for-byte, unquoted fields are trimmed of surrounding spaces.
// Record ids are 0-based file positions.
std::vector<PairRecord> read_pairs(const std::filesystem::path &path);
std::vector<PairRecord> parse_pairs_csv(std::string_view text,
                                        std::string_view source = "<input>");

// Scores CSV: id,left,right,label,score,scorer_id,error. Score has 6 decimals
// and is empty on failed rows.
std::string format_scores_csv(const std::vector<ScoreOutcome> &rows);
void write_scores(const std::filesystem::path &path,
                  const std::vector<ScoreOutcome> &rows);
std::vector<ScoreOutcome> read_scores(const std::filesystem::path &path);
std::vector<ScoreOutcome> parse_scores_csv(std::string_view text,
                                           std::string_view source = "<input>");

void write_report(const std::filesystem::path &path,
                  const eval::EvalReport &report);

std::vector<ScoreOutcome> to_outcomes(const std::vector<ScoredPair> &scored);
// Throws InputError naming the first failed row.
std::vector<ScoredPair> to_scored(const std::vector<ScoreOutcome> &rows);

std::string format_score(double score);
std::string csv_field(std::string_view value);

std::string read_file(const std::filesystem::path &path);
// Writes to a temporary sibling and renames it over `path`. Nothing is left
// at `path` when the write fails.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view content);

} // namespace fuzzymatch::io
