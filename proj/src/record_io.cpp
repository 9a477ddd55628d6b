// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "lastde/record_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>
#include <zlib.h>

namespace lastde {
namespace {

using json = nlohmann::json;

std::string describe(std::size_t line, const std::string& field,
                     std::optional<std::size_t> index, const std::string& detail) {
  std::string msg = "line " + std::to_string(line) + ": field '" + field + "'";
  if (index) msg += " index " + std::to_string(*index);
  return msg + ": " + detail;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

class Parser {
 public:
  Parser(const json& root, std::size_t line) : root_(root), line_(line) {}

  [[noreturn]] void fail(const std::string& field, std::optional<std::size_t> index,
                         const std::string& detail) const {
    throw RecordError(line_, field, index, detail);
  }

  const json& require(const json& obj, const std::string& field,
                      const std::string& path) const {
    auto it = obj.find(field);
    if (it == obj.end()) fail(path, std::nullopt, "missing");
    return *it;
  }

  const json& require(const std::string& field) const { return require(root_, field, field); }

  std::string string_field(const json& obj, const std::string& field,
                           const std::string& path) const {
    const json& v = require(obj, field, path);
    if (!v.is_string()) fail(path, std::nullopt, "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const json& v, const std::string& field,
                       std::optional<std::size_t> index) const {
    if (!v.is_number_integer()) fail(field, index, "expected an integer");
    return v.get<std::int64_t>();
  }

  double number(const json& v, const std::string& field,
                std::optional<std::size_t> index) const {
    if (!v.is_number()) fail(field, index, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(field, index, "expected a finite number");
    return d;
  }

  const json& array(const json& v, const std::string& field, std::size_t expected) const {
    if (!v.is_array()) fail(field, std::nullopt, "expected an array");
    if (v.size() != expected) {
      fail(field, std::nullopt,
           "length " + std::to_string(v.size()) + " differs from n_tokens " +
               std::to_string(expected));
    }
    return v;
  }

 private:
  const json& root_;
  std::size_t line_;
};

}  // namespace

RecordError::RecordError(std::size_t line, std::string field,
                         std::optional<std::size_t> index, const std::string& detail)
    : Error(Errc::kFormat, describe(line, field, index, detail)),
      line_(line),
      field_(std::move(field)),
      index_(index) {}

TextRecord parse_record(std::string_view text, std::size_t line) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RecordError(line, "<line>", std::nullopt, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw RecordError(line, "<line>", std::nullopt, "expected a JSON object");
  }
  const Parser p(root, line);

  const auto version = p.integer(p.require("schema_version"), "schema_version", std::nullopt);
  if (version != kSchemaVersion) {
    p.fail("schema_version", std::nullopt, "unsupported version " + std::to_string(version));
  }

  TextRecord r;
  r.id = p.string_field(root, "id", "id");
  const auto label = parse_label(p.string_field(root, "label", "label"));
  if (!label) p.fail("label", std::nullopt, "expected human, machine or unknown");
  r.label = *label;

  const auto n = p.integer(p.require("n_tokens"), "n_tokens", std::nullopt);
  if (n < 1) p.fail("n_tokens", std::nullopt, "must be >= 1");
  const auto count = static_cast<std::size_t>(n);

  const json& lp = p.array(p.require("logprob"), "logprob", count);
  r.logprob.resize(n);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = p.number(lp[i], "logprob", i);
    if (v > 0.0) p.fail("logprob", i, "log-probability must be <= 0");
    r.logprob[static_cast<Eigen::Index>(i)] = v;
  }

  const json& rk = p.array(p.require("rank"), "rank", count);
  r.rank.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto v = p.integer(rk[i], "rank", i);
    if (v < 1) p.fail("rank", i, "rank must be >= 1");
    r.rank[i] = v;
  }

  const json& en = p.array(p.require("entropy"), "entropy", count);
  r.entropy.resize(n);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = p.number(en[i], "entropy", i);
    if (v < 0.0) p.fail("entropy", i, "entropy must be >= 0");
    r.entropy[static_cast<Eigen::Index>(i)] = v;
  }

  if (auto it = root.find("topk"); it != root.end() && !it->is_null()) {
    const json& tk = *it;
    if (!tk.is_object()) p.fail("topk", std::nullopt, "expected an object");
    const auto k = p.integer(p.require(tk, "k", "topk.k"), "topk.k", std::nullopt);
    if (k < 1) p.fail("topk.k", std::nullopt, "must be >= 1");
    const json& ids = p.array(p.require(tk, "token_ids", "topk.token_ids"), "topk.token_ids", count);
    const json& lps = p.array(p.require(tk, "logprobs", "topk.logprobs"), "topk.logprobs", count);
    std::vector<PositionDistribution> dists(count);
    for (std::size_t i = 0; i < count; ++i) {
      const json& row_ids = ids[i];
      const json& row_lp = lps[i];
      if (!row_ids.is_array() || !row_lp.is_array() || row_ids.size() != row_lp.size() ||
          row_lp.empty() || row_lp.size() > static_cast<std::size_t>(k)) {
        p.fail("topk", i, "expected 1..k ids and log-probabilities of equal length");
      }
      auto& d = dists[i];
      d.token_ids.reserve(row_ids.size());
      d.logprobs.resize(static_cast<Eigen::Index>(row_lp.size()));
      for (std::size_t j = 0; j < row_ids.size(); ++j) {
        d.token_ids.push_back(p.integer(row_ids[j], "topk.token_ids", i));
        d.logprobs[static_cast<Eigen::Index>(j)] = p.number(row_lp[j], "topk.logprobs", i);
      }
      d.renormalized = true;
      try {
        d.validate();
      } catch (const Error& e) {
        p.fail("topk", i, e.what());
      }
    }
    r.topk = std::move(dists);
  }

  if (auto it = root.find("provenance"); it != root.end() && !it->is_null()) {
    const json& pv = *it;
    if (!pv.is_object()) p.fail("provenance", std::nullopt, "expected an object");
    if (pv.contains("proxy_model")) {
      r.provenance.proxy_model_name = p.string_field(pv, "proxy_model", "provenance.proxy_model");
    }
    if (pv.contains("source_model")) {
      r.provenance.source_model_name =
          p.string_field(pv, "source_model", "provenance.source_model");
    }
    if (auto m = pv.find("retained_mass"); m != pv.end() && !m->is_null()) {
      const double mass = p.number(*m, "provenance.retained_mass", std::nullopt);
      if (mass < 0.0 || mass > 1.0 + kNormalizationTolerance) {
        p.fail("provenance.retained_mass", std::nullopt, "must lie in [0, 1]");
      }
      r.provenance.retained_mass = mass;
    }
  }
  return r;
}

std::string format_record(const TextRecord& r) {
  json root = json::object();
  root["schema_version"] = kSchemaVersion;
  root["id"] = r.id;
  root["label"] = std::string(label_name(r.label));
  root["n_tokens"] = r.n_tokens();
  root["logprob"] = std::vector<double>(r.logprob.begin(), r.logprob.end());
  root["rank"] = r.rank;
  root["entropy"] = std::vector<double>(r.entropy.begin(), r.entropy.end());
  if (r.topk) {
    json ids = json::array();
    json lps = json::array();
    Eigen::Index k = 0;
    for (const auto& d : *r.topk) {
      ids.push_back(d.token_ids);
      lps.push_back(std::vector<double>(d.logprobs.begin(), d.logprobs.end()));
      k = std::max(k, d.size());
    }
    root["topk"] = {{"k", k}, {"token_ids", std::move(ids)}, {"logprobs", std::move(lps)}};
  }
  json pv = json::object();
  pv["proxy_model"] = r.provenance.proxy_model_name;
  pv["source_model"] = r.provenance.source_model_name;
  if (r.provenance.retained_mass) pv["retained_mass"] = *r.provenance.retained_mass;
  root["provenance"] = std::move(pv);
  return root.dump();
}

// gzopen reads plain files transparently, so one handle type serves both.
struct RecordReader::Handle {
  gzFile file = nullptr;
  ~Handle() {
    if (file) gzclose(file);
  }
};

RecordReader::RecordReader(const std::filesystem::path& path) : handle_(std::make_unique<Handle>()) {
  handle_->file = gzopen(path.c_str(), "rb");
  if (!handle_->file) {
    throw Error(Errc::kInvalidInput, "cannot open record file " + path.string());
  }
  gzbuffer(handle_->file, 1 << 17);
}

RecordReader::~RecordReader() = default;
RecordReader::RecordReader(RecordReader&&) noexcept = default;
RecordReader& RecordReader::operator=(RecordReader&&) noexcept = default;

bool RecordReader::read_line(std::string& out) {
  out.clear();
  char buf[1 << 16];
  while (gzgets(handle_->file, buf, sizeof buf) != nullptr) {
    out += buf;
    if (!out.empty() && out.back() == '\n') {
      out.pop_back();
      if (!out.empty() && out.back() == '\r') out.pop_back();
      return true;
    }
  }
  int errnum = 0;
  const char* msg = gzerror(handle_->file, &errnum);
  if (errnum != Z_OK && errnum != Z_STREAM_END) {
    throw Error(Errc::kFormat, std::string("read error: ") + msg);
  }
  return !out.empty();
}

std::optional<TextRecord> RecordReader::next() {
  std::string text;
  while (read_line(text)) {
    ++line_;
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    return parse_record(text, line_);
  }
  return std::nullopt;
}

struct RecordWriter::Handle {
  gzFile gz = nullptr;
  std::ofstream plain;
};

RecordWriter::RecordWriter(const std::filesystem::path& path) : handle_(std::make_unique<Handle>()) {
  if (ends_with(path.string(), ".gz")) {
    handle_->gz = gzopen(path.c_str(), "wb");
    if (!handle_->gz) throw Error(Errc::kInvalidInput, "cannot create " + path.string());
  } else {
    handle_->plain.open(path, std::ios::binary | std::ios::trunc);
    if (!handle_->plain) throw Error(Errc::kInvalidInput, "cannot create " + path.string());
  }
}

RecordWriter::~RecordWriter() {
  try {
    close();
  } catch (...) {
  }
}

RecordWriter::RecordWriter(RecordWriter&&) noexcept = default;
RecordWriter& RecordWriter::operator=(RecordWriter&&) noexcept = default;

void RecordWriter::write(const TextRecord& record) {
  if (!handle_) throw Error(Errc::kInvalidInput, "record writer is closed");
  std::string line = format_record(record);
  line.push_back('\n');
  if (handle_->gz) {
    if (gzwrite(handle_->gz, line.data(), static_cast<unsigned>(line.size())) !=
        static_cast<int>(line.size())) {
      throw Error(Errc::kFormat, "gzip write failed");
    }
  } else {
    handle_->plain << line;
    if (!handle_->plain) throw Error(Errc::kFormat, "write failed");
  }
}

void RecordWriter::close() {
  if (!handle_) return;
  if (handle_->gz) {
    const int rc = gzclose(handle_->gz);
    handle_->gz = nullptr;
    if (rc != Z_OK) throw Error(Errc::kFormat, "gzip close failed");
  } else if (handle_->plain.is_open()) {
    handle_->plain.close();
  }
  handle_.reset();
}

std::vector<TextRecord> read_records(const std::filesystem::path& path) {
  RecordReader reader(path);
  std::vector<TextRecord> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  return out;
}

void write_records(const std::filesystem::path& path, const std::vector<TextRecord>& records) {
  RecordWriter writer(path);
  for (const auto& r : records) writer.write(r);
  writer.close();
}

}  // namespace lastde
