#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace keymaze {

// A grid cell in spreadsheet notation: letters name the column (A, B, ...,
// Z, AA, AB, ...), digits name the row starting at 1. Column 0 row 1 is "A1".
struct cell_label {
  int col = 0;  // 0-based
  int row = 1;  // 1-based

  auto operator<=>(const cell_label&) const = default;

  std::string str() const;
  static std::optional<cell_label> parse(std::string_view text);
};

std::string render_label(int col, int row);
std::optional<std::pair<int, int>> parse_label(std::string_view text);

}  // namespace keymaze

template <>
struct std::hash<keymaze::cell_label> {
  std::size_t operator()(const keymaze::cell_label& c) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(c.col) << 32) ^
                                  c.row);
  }
};
