#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liftscore {

enum class ErrorKind {
  InputDomain,     // non-finite or non-positive numeric input
  Domain,          // bodyweight outside a model's permitted interval
  ModelIntegrity,  // model would predict a non-positive total
  Config,          // malformed configuration, model file or CLI arguments
  Io,              // unreadable or unwritable file
  Ingest,          // fatal ingestion problem (missing column, empty sample)
  Fit,             // least-squares problem cannot be solved as posed
  Statistic,       // statistic undefined for the given data
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace liftscore
