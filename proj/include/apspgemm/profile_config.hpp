#ifndef APSPGEMM_PROFILE_CONFIG_HPP
#define APSPGEMM_PROFILE_CONFIG_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "apspgemm/ap_core.hpp"

namespace apspgemm {

class ProfileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProfileKey {
    std::string_view name;
    std::string_view unit;
    std::string_view description;
};

/// Every recognized configuration key.
const std::vector<ProfileKey>& profile_keys();

/// `key = value` lines; `#` starts a comment; unspecified keys keep defaults.
/// Unknown keys, malformed numbers and out-of-range values raise ProfileError.
CostProfile parse_profile(std::istream& in);
CostProfile parse_profile(std::string_view text);
CostProfile load_profile(const std::string& path);

/// Renders every key, one per line, in profile_keys() order.
std::string format_profile(const CostProfile& p);

}  // namespace apspgemm

#endif  // APSPGEMM_PROFILE_CONFIG_HPP
