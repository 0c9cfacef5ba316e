#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace choi {

enum class Status { member, non_member, undetermined };

// Three-valued membership result. Member verdicts carry a re-checkable
// certificate, non-member verdicts a re-checkable witness, undetermined
// verdicts only the search evidence.
struct Evidence {
  long samples_tested = 0;
  double min_value_seen = 0.0;
  std::uint64_t seed = 0;
};

struct Verdict {
  Status status = Status::undetermined;
  nlohmann::json certificate;  // null unless member
  nlohmann::json witness;      // null unless non_member
  Evidence evidence;
};

struct TestConfig {
  double psd_tol = 1e-9;
  double sep_tol = 1e-6;
  int multistarts = 64;
  int gilbert_max_iters = 5000;
  std::uint64_t seed = 0;
};

inline const char* to_string(Status s) {
  switch (s) {
    case Status::member: return "member";
    case Status::non_member: return "non_member";
    default: return "undetermined";
  }
}

}  // namespace choi
