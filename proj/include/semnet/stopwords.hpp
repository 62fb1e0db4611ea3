#pragma once

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace semnet {

// Built-in English stopword list (the standard 174-word list). All lowercase.
const std::vector<std::string>& default_stopwords();

std::unordered_set<std::string> default_stopword_set();

// One word per line; blank lines and lines starting with '#' are ignored.
// Words must already be lowercase.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& file);

}  // namespace semnet
