#include <iostream>

#include "mcover/acceptance.hpp"

int main() {
  bool all = true;
  for (int id = 1; id <= mcover::kAcceptanceCriteria; ++id) {
    const auto c = mcover::run_criterion(id);
    std::cout << mcover::format_line(c) << std::endl;
    all = all && c.passed;
  }
  return all ? 0 : 1;
}
