#pragma once

#include <string>
#include <string_view>

namespace baitpress {

/// Porter suffix-stripping stemmer, matching the output of Martin Porter's
/// reference C release (including its two noted departures and the
/// pass-through of words of length <= 2). Input must be lowercase ASCII;
/// anything containing other bytes, and the number token "[n]", is returned
/// unchanged.
std::string porter_stem(std::string_view word);

}  // namespace baitpress
