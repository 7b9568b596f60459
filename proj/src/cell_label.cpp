#include "keymaze/cell_label.hpp"

#include "keymaze/errors.hpp"

namespace keymaze {

std::string render_label(int col, int row) {
  if (col < 0 || row < 1) {
    throw data_error("render_label: column must be >= 0 and row >= 1");
  }
  // Bijective base 26: A..Z, AA..AZ, BA..
  std::string letters;
  int n = col + 1;
  while (n > 0) {
    const int rem = (n - 1) % 26;
    letters.insert(letters.begin(), static_cast<char>('A' + rem));
    n = (n - 1) / 26;
  }
  return letters + std::to_string(row);
}

std::optional<std::pair<int, int>> parse_label(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && text[i] >= 'A' && text[i] <= 'Z') ++i;
  const std::size_t letters = i;
  if (letters == 0 || letters > 4) return std::nullopt;
  if (i >= text.size()) return std::nullopt;
  if (text[i] == '0') return std::nullopt;  // rows are 1-based, no leading zero
  long long row = 0;
  std::size_t digits = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    row = row * 10 + (text[i] - '0');
    ++i;
    ++digits;
  }
  if (digits == 0 || digits > 7 || i != text.size()) return std::nullopt;
  long long col = 0;
  for (std::size_t k = 0; k < letters; ++k) col = col * 26 + (text[k] - 'A' + 1);
  return std::make_pair(static_cast<int>(col - 1), static_cast<int>(row));
}

std::string cell_label::str() const { return render_label(col, row); }

std::optional<cell_label> cell_label::parse(std::string_view text) {
  const auto parsed = parse_label(text);
  if (!parsed) return std::nullopt;
  return cell_label{parsed->first, parsed->second};
}

}  // namespace keymaze
