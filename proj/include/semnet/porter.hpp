#pragma once

#include <string>
#include <string_view>

namespace semnet {

// Porter's suffix-stripping algorithm for English. Input must be lowercase
// ASCII letters; other strings are returned unchanged. Words of length <= 2
// are never stemmed, matching the reference implementation.
std::string porter_stem(std::string_view word);

}  // namespace semnet
