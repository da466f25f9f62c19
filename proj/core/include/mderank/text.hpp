#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small ASCII text helpers shared across modules.
namespace mderank {

std::string to_lower_ascii(std::string_view s);

/// Splits on ASCII whitespace, dropping empty fields.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Porter stem (Martin Porter's reference implementation). Expects a
/// lowercase word; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

/// Lowercases, splits on whitespace, stems every word and re-joins with a
/// single space. This is the phrase identity used by evaluation and top-k
/// deduplication.
std::string stem_phrase(std::string_view phrase);

}  // namespace mderank
