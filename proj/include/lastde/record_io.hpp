// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

// Record files hold one JSON object per line (schema_version 1). Files ending
// in ".gz" are written gzip-compressed; compressed and plain files are both
// accepted on read.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lastde/error.hpp"
#include "lastde/text_record.hpp"

namespace lastde {

inline constexpr int kSchemaVersion = 1;

/// Validation failure for one line of a record file.
class RecordError : public Error {
 public:
  RecordError(std::size_t line, std::string field, std::optional<std::size_t> index,
              const std::string& detail);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  std::size_t line_;
  std::string field_;
  std::optional<std::size_t> index_;
};

/// Parses and validates one serialized record. `line` is used for messages.
TextRecord parse_record(std::string_view text, std::size_t line = 1);

/// Serializes a record on a single line (no trailing newline). Doubles are
/// written with shortest round-trip precision.
std::string format_record(const TextRecord& record);

class RecordReader {
 public:
  explicit RecordReader(const std::filesystem::path& path);
  ~RecordReader();
  RecordReader(RecordReader&&) noexcept;
  RecordReader& operator=(RecordReader&&) noexcept;

  /// Next record, or nullopt at end of file. Blank lines are skipped.
  std::optional<TextRecord> next();

  std::size_t line() const noexcept { return line_; }

 private:
  bool read_line(std::string& out);

  struct Handle;
  std::unique_ptr<Handle> handle_;
  std::size_t line_ = 0;
};

class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path);
  ~RecordWriter();
  RecordWriter(RecordWriter&&) noexcept;
  RecordWriter& operator=(RecordWriter&&) noexcept;

  void write(const TextRecord& record);
  void close();

 private:
  struct Handle;
  std::unique_ptr<Handle> handle_;
};

std::vector<TextRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, const std::vector<TextRecord>& records);

}  // namespace lastde
