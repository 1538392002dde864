#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace gslrec::experiments {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

inline std::string format_count(std::uint64_t v) { return std::to_string(v); }

/// Line-oriented CSV sink. Callers push whole rows; commas and newlines are
/// the only structure, so field values must not contain either.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    path_ = path;
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("close failed: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace gslrec::experiments
