// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).

#ifndef EWPS_DATASET_HPP
#define EWPS_DATASET_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "ewps/errors.hpp"

namespace ewps {

/// An ordered collection of positive lifetimes with a cached sorted copy and
/// the summaries the likelihood machinery reuses.
class Dataset {
 public:
  explicit Dataset(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw domain_error("Dataset: needs at least one observation");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] > 0) || !std::isfinite(values_[i]))
        throw domain_error("Dataset: nonpositive or non-finite value at row " +
                           std::to_string(i + 1));
    }
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end());
    sum_ = std::accumulate(values_.begin(), values_.end(), 0.0);
    sum_log_ = 0.0;
    for (double v : values_) sum_log_ += std::log(v);
  }

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return values_.size(); }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }
  double mean() const { return sum_ / static_cast<double>(values_.size()); }
  double sum() const { return sum_; }
  double sum_log() const { return sum_log_; }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  double sum_ = 0.0;
  double sum_log_ = 0.0;
};

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}
}  // namespace detail

/// Reads a single-column CSV of positive decimals. One optional header line
/// is tolerated; parse failures carry the 1-based line number.
inline Dataset ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'", 0);
  std::vector<double> values;
  std::string line;
  long lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    const bool parsed = end != t.c_str() && detail::trim(std::string(end)).empty();
    if (!parsed) {
      if (first_content) {  // header line
        first_content = false;
        continue;
      }
      throw parse_error("not a number: '" + t + "'", lineno);
    }
    first_content = false;
    if (!(v > 0) || !std::isfinite(v))
      throw parse_error("lifetimes must be positive and finite, got " + t, lineno);
    values.push_back(v);
  }
  if (values.empty()) throw parse_error("no data rows in '" + path + "'", lineno);
  return Dataset(std::move(values));
}

}  // namespace ewps

#endif  // EWPS_DATASET_HPP
