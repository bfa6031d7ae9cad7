// Set arithmetic on unions of intervals.

#include <iostream>
#include <string>
#include <variant>

#include "dsmfuse/interval_set.hpp"

int main() {
  using namespace dsmfuse;
  const auto show = [](const SetValue& s) { return format_set(s, {.short_numbers = true}); };
  const SetValue a = parse_set("[0.1,0.2] U {0.3}");
  const SetValue b = parse_set("(0.4,0.6) U [0.7,0.8]");
  std::cout << show(a) << " + " << show(b) << " = " << show(a + b) << '\n';
  std::cout << show(b) << " - " << show(a) << " = " << show(b - a) << '\n';
  std::cout << show(a) << " * " << show(b) << " = " << show(a * b) << '\n';
  std::cout << show(a) << " / " << show(b) << " = " << show(std::get<SetValue>(div(a, b))) << '\n';
  std::cout << "clamped to [0,1]: " << show(clamp_unit(b + b)) << '\n';
}
