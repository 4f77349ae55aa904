#pragma once

#include "scenvar/catalog.hpp"

#include <filesystem>
#include <string>

namespace scenvar::fixture {

std::filesystem::path fixture_dir();
std::string read_fixture(const std::string& name);

// Ingests and cleans fixtures/catalog.csv, keeping rows dated in
// [first_year, last_year].
void load_fixture_catalog(Catalog& catalog, int first_year = 0, int last_year = 9999);

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace scenvar::fixture
