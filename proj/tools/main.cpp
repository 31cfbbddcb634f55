// CLI entry point; subcommands are wired up in harness.hpp-based code once
// the harness exists. Placeholder kept minimal during bring-up.
#include <iostream>

int main() {
  std::cout << "scenfuzz: not yet wired\n";
  return 0;
}
