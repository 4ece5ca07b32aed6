// Regenerates the bundled usage log.

#include <iostream>
#include <string_view>

#include "study_fixture.hpp"

int main(int argc, char** argv) {
  if (argc > 2 || (argc == 2 && std::string_view(argv[1]).starts_with("-"))) {
    std::cerr << "usage: make_study_fixture [DIR]   (default data/study)\n";
    return 2;
  }
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data/study";
  try {
    selfsched::study::write_fixture(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << (dir / "events.jsonl").string() << "\n";
  return 0;
}
