// Stdio agent demo: reads observation JSON lines, always answers full brake.
// Used by tests and as a template for wiring real agents over the process
// boundary.
#include <iostream>
#include <string>

#include <json.hpp>

int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    nlohmann::json::parse(line);  // validate the observation frame
    std::cout << R"({"throttle":0.0,"brake":1.0,"steer":0.0})" << "\n" << std::flush;
  }
  return 0;
}
