#include "fixture_dgp.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  const auto dgp = scenvar::fixture::uae_wheat_dgp();
  const std::string csv = scenvar::fixture::render_csv(dgp, scenvar::fixture::simulate(dgp));
  if (argc < 2) {
    std::cout << csv;
    return 0;
  }
  std::ofstream out(argv[1], std::ios::binary | std::ios::trunc);
  out << csv;
  return out ? 0 : 1;
}
