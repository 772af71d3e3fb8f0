#pragma once

// JSON documents for built profiles. Reals are written as shortest
// round-trip decimals; an infinite piece end is written as null.

#include <stdexcept>
#include <string>
#include <variant>

#include "profile_lab/bidding_profile.hpp"
#include "profile_lab/excursion_profile.hpp"

namespace profile_lab {

/// Raised for documents that are not valid profile files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_json(const BiddingProfile& p, int indent = -1);
std::string to_json(const ExcursionProfile& p, int indent = -1);

using AnyProfile = std::variant<BiddingProfile, ExcursionProfile>;

AnyProfile profile_from_json(const std::string& text);

void save_profile(const std::string& path, const AnyProfile& p);
AnyProfile load_profile(const std::string& path);

std::string to_json(const VerificationReport& r, int indent = 2);
std::string to_json(const ExcursionReport& r, int indent = 2);

}  // namespace profile_lab
