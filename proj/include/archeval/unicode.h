#pragma once

#include <string>
#include <string_view>

namespace archeval {

// Decodes UTF-8 into code points. Bytes that do not start a valid sequence
// are passed through as single code points in the range U+0080..U+00FF.
std::u32string decode_utf8(std::string_view text);

// Replaces every run of ASCII whitespace with a single space. Leading and
// trailing runs are kept (as one space each).
std::string collapse_whitespace(std::string_view text);

}  // namespace archeval
