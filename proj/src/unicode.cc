#include "archeval/unicode.h"

#include <cctype>

namespace archeval {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    auto byte = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = byte;
    if (byte >= 0xF0 && byte <= 0xF4) {
      extra = 3;
      cp = byte & 0x07;
    } else if (byte >= 0xE0) {
      extra = byte <= 0xEF ? 2 : 0;
      cp = byte & 0x0F;
    } else if (byte >= 0xC2) {
      extra = 1;
      cp = byte & 0x1F;
    }
    bool valid = extra > 0 && i + extra < text.size();
    if (valid) {
      for (int k = 1; k <= extra; ++k) {
        auto cont = static_cast<unsigned char>(text[i + k]);
        if ((cont & 0xC0) != 0x80) {
          valid = false;
          break;
        }
        cp = (cp << 6) | (cont & 0x3F);
      }
    }
    if (valid) {
      out.push_back(cp);
      i += extra + 1;
    } else {
      out.push_back(byte);
      ++i;
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  return out;
}

}  // namespace archeval
