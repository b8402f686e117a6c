#pragma once

#include <string>
#include <utility>
#include <vector>

namespace geovec::testing {

// Minimal zip archive writer for test feeds. `deflate` compresses entries
// with raw deflate, otherwise they are stored.
std::string make_zip(const std::vector<std::pair<std::string, std::string>>& entries, bool deflate = false);

}  // namespace geovec::testing
