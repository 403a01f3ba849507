#pragma once

#include <string>
#include <string_view>

namespace mltopics {

/// Porter (1980) suffix-stripping stemmer, matching the behaviour of the
/// author's reference C implementation (including its "bli" -> "ble" and
/// "logi" -> "log" rules). Input is expected lowercase; characters outside
/// a-z are treated as consonants. Words of length <= 2 are returned as is.
std::string porter_stem(std::string_view word);

}  // namespace mltopics
