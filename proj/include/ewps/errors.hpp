// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).

#ifndef EWPS_ERRORS_HPP
#define EWPS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ewps {

/// Argument or parameter outside its mathematical domain.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A positive quantity (typically a survival probability) underflowed to zero.
class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Malformed input file; carries the offending line number.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// A series evaluation stalled before meeting its tail criterion.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, long terms, double last_term)
      : std::runtime_error(what + " [terms=" + std::to_string(terms) +
                           ", last term=" + std::to_string(last_term) + "]"),
        terms_(terms),
        last_term_(last_term) {}
  long terms() const noexcept { return terms_; }
  double last_term() const noexcept { return last_term_; }

 private:
  long terms_;
  double last_term_;
};

/// The integral does not exist or adaptive quadrature could not reach tolerance.
class integrability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optimizer failure; carries the last iterate for post-mortem.
class fit_error : public std::runtime_error {
 public:
  fit_error(const std::string& what, std::vector<double> last_params, double last_loglik)
      : std::runtime_error(what), last_params_(std::move(last_params)), last_loglik_(last_loglik) {}
  const std::vector<double>& last_params() const noexcept { return last_params_; }
  double last_loglik() const noexcept { return last_loglik_; }

 private:
  std::vector<double> last_params_;
  double last_loglik_;
};

}  // namespace ewps

#endif  // EWPS_ERRORS_HPP
