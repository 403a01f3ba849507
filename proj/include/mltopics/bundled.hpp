#pragma once

#include <string_view>

// Data files compiled into the library so the tools work without a data
// directory. Generated from data/ at configure time.
namespace mltopics::bundled {

std::string_view default_registry_csv();
std::string_view fox_stoplist();

}  // namespace mltopics::bundled
