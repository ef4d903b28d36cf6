#include "cliff/blade.hpp"

#include "cliff/error.hpp"

namespace cliff {

std::string blade_name(Blade b) {
  std::string name;
  for (std::uint32_t m = b.mask; m != 0; m &= m - 1) {
    name.push_back(static_cast<char>('1' + std::countr_zero(m)));
  }
  return name;
}

Blade parse_blade(std::string_view name, int n) {
  Blade b;
  int last = 0;
  for (char c : name) {
    const int a = c - '0';
    if (a < 1 || a > n || a <= last) {
      throw Error(ErrorKind::InvalidArgument,
                  "invalid blade key \"" + std::string(name) + "\" for n=" + std::to_string(n));
    }
    b.mask |= std::uint32_t{1} << (a - 1);
    last = a;
  }
  return b;
}

}  // namespace cliff
