#include "fuzzymatch/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "fuzzymatch/errors.hpp"

namespace fuzzymatch::io {

namespace {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0; // 1-based line where the record starts
};

std::string_view trim_spaces(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<CsvRecord> parse_csv(std::string_view text, std::string_view source) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF")
    text.remove_prefix(3);

  std::vector<CsvRecord> records;
  CsvRecord rec;
  std::string field;
  bool quoted = false;     // current field started with a quote
  bool in_quotes = false;  // inside the quoted section
  bool after_quote = false; // closing quote seen, only spaces may follow
  std::size_t line = 1;
  rec.line = 1;

  auto malformed = [&](const std::string &why) {
    return InputError(std::string(source) + ": malformed CSV at line " +
                      std::to_string(line) + ": " + why);
  };
  auto end_field = [&] {
    rec.fields.push_back(quoted ? field : std::string(trim_spaces(field)));
    field.clear();
    quoted = in_quotes = after_quote = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank)
      records.push_back(std::move(rec));
    rec = CsvRecord{};
    rec.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n')
          ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
        ++i;
      ++line;
      end_record();
    } else if (after_quote) {
      if (c != ' ' && c != '\t')
        throw malformed("unexpected character after closing quote");
    } else if (c == '"') {
      if (!trim_spaces(field).empty())
        throw malformed("quote inside unquoted field");
      field.clear();
      quoted = in_quotes = true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes)
    throw malformed("unterminated quoted field");
  if (!field.empty() || quoted || !rec.fields.empty())
    end_record();
  return records;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto &c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Header {
  std::vector<std::string> names;

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name)
        return i;
    return std::nullopt;
  }
};

Header read_header(const std::vector<CsvRecord> &records, std::string_view source) {
  if (records.empty())
    throw InputError(std::string(source) + ": file is empty (header required)");
  Header h;
  for (const auto &f : records[0].fields)
    h.names.push_back(lower(trim_spaces(f)));
  return h;
}

std::size_t require(const Header &h, std::string_view name, std::string_view source) {
  const auto idx = h.find(name);
  if (!idx)
    throw InputError(std::string(source) + ": missing required column '" +
                     std::string(name) + "'");
  return *idx;
}

std::string row_prefix(std::string_view source, const CsvRecord &rec) {
  return std::string(source) + ": row at line " + std::to_string(rec.line);
}

void check_width(const Header &h, const CsvRecord &rec, std::string_view source) {
  if (rec.fields.size() != h.names.size())
    throw InputError(row_prefix(source, rec) + ": expected " +
                     std::to_string(h.names.size()) + " fields, found " +
                     std::to_string(rec.fields.size()));
}

std::optional<int> parse_label(const std::string &v, const CsvRecord &rec,
                               std::string_view source) {
  if (v.empty())
    return std::nullopt;
  if (v == "0")
    return 0;
  if (v == "1")
    return 1;
  throw InvalidLabelError(row_prefix(source, rec) + ": invalid label '" + v +
                          "' (expected 0, 1 or empty)");
}

PairRecord make_pair(const Header &h, const CsvRecord &rec, std::size_t id,
                     std::size_t left, std::size_t right,
                     std::optional<std::size_t> label, std::string_view source) {
  check_width(h, rec, source);
  PairRecord p;
  p.id = id;
  p.left = rec.fields[left];
  p.right = rec.fields[right];
  if (label)
    p.label = parse_label(rec.fields[*label], rec, source);
  try {
    validate_pair(p);
  } catch (const InputError &e) {
    throw InputError(row_prefix(source, rec) + ": " + e.what());
  }
  return p;
}

} // namespace

std::vector<PairRecord> parse_pairs_csv(std::string_view text,
                                        std::string_view source) {
  const auto records = parse_csv(text, source);
  const Header h = read_header(records, source);
  const auto left = require(h, "left", source);
  const auto right = require(h, "right", source);
  const auto label = h.find("label");

  std::vector<PairRecord> out;
  out.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r)
    out.push_back(make_pair(h, records[r], r - 1, left, right, label, source));
  return out;
}

std::vector<PairRecord> read_pairs(const std::filesystem::path &path) {
  return parse_pairs_csv(read_file(path), path.string());
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

std::string csv_field(std::string_view value) {
  const bool needs_quotes =
      value.find_first_of(",\"\r\n") != std::string_view::npos ||
      (!value.empty() && (value.front() == ' ' || value.front() == '\t' ||
                          value.back() == ' ' || value.back() == '\t'));
  if (!needs_quotes)
    return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"')
      out += "\"\"";
    else
      out += c;
  }
  out += '"';
  return out;
}

std::string format_scores_csv(const std::vector<ScoreOutcome> &rows) {
  std::string out = "id,left,right,label,score,scorer_id,error\n";
  for (const auto &r : rows) {
    out += std::to_string(r.pair.id);
    out += ',';
    out += csv_field(r.pair.left);
    out += ',';
    out += csv_field(r.pair.right);
    out += ',';
    if (r.pair.label)
      out += std::to_string(*r.pair.label);
    out += ',';
    if (r.score)
      out += format_score(*r.score);
    out += ',';
    out += csv_field(r.scorer_id);
    out += ',';
    if (!r.score)
      out += csv_field(r.error.empty() ? "unknown error" : r.error);
    out += '\n';
  }
  return out;
}

void write_scores(const std::filesystem::path &path,
                  const std::vector<ScoreOutcome> &rows) {
  write_file_atomic(path, format_scores_csv(rows));
}

std::vector<ScoreOutcome> parse_scores_csv(std::string_view text,
                                           std::string_view source) {
  const auto records = parse_csv(text, source);
  const Header h = read_header(records, source);
  const auto left = require(h, "left", source);
  const auto right = require(h, "right", source);
  const auto score = require(h, "score", source);
  const auto label = h.find("label");
  const auto scorer = h.find("scorer_id");
  const auto error = h.find("error");

  std::vector<ScoreOutcome> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto &rec = records[r];
    ScoreOutcome o;
    o.pair = make_pair(h, rec, r - 1, left, right, label, source);
    if (scorer)
      o.scorer_id = rec.fields[*scorer];
    if (error)
      o.error = rec.fields[*error];
    const std::string &s = rec.fields[score];
    if (!s.empty()) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size() || !(v >= 0.0 && v <= 1.0))
        throw InputError(row_prefix(source, rec) + ": invalid score '" + s + "'");
      o.score = v;
    }
    if (o.score && !o.error.empty())
      throw InputError(row_prefix(source, rec) +
                       ": row has both a score and an error");
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<ScoreOutcome> read_scores(const std::filesystem::path &path) {
  return parse_scores_csv(read_file(path), path.string());
}

void write_report(const std::filesystem::path &path,
                  const eval::EvalReport &report) {
  write_file_atomic(path, eval::report_to_json(report));
}

std::vector<ScoreOutcome> to_outcomes(const std::vector<ScoredPair> &scored) {
  std::vector<ScoreOutcome> out;
  out.reserve(scored.size());
  for (const auto &s : scored)
    out.push_back({s.pair(), s.scorer_id(), s.score(), {}});
  return out;
}

std::vector<ScoredPair> to_scored(const std::vector<ScoreOutcome> &rows) {
  std::vector<ScoredPair> out;
  out.reserve(rows.size());
  for (const auto &r : rows) {
    if (!r.score)
      throw InputError("row " + std::to_string(r.pair.id) +
                       " has no score" +
                       (r.error.empty() ? "" : " (" + r.error + ")"));
    out.emplace_back(r.pair, *r.score,
                     r.scorer_id.empty() ? std::string("unknown") : r.scorer_id);
  }
  return out;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path &path,
                       std::string_view content) {
  static std::atomic<unsigned> counter{0};
  const auto parent = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
  std::error_code ec;
  if (!std::filesystem::is_directory(parent, ec))
    throw IoError("output directory does not exist: " + parent.string());

  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

} // namespace fuzzymatch::io
