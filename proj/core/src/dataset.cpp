#include "sl/dataset.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "sl/error.hpp"

namespace sl {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) {
    fields.push_back(field);
  }
  return fields;
}

}  // namespace

DatasetManifest load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw DataError("cannot open manifest: " + manifest_path.string());
  }
  const std::filesystem::path base = manifest_path.parent_path();
  DatasetManifest manifest{manifest_path, {}};
  std::unordered_set<std::string> ids;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto fields = split_tabs(line);
    const std::string where = manifest_path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 4) {
      throw DataError(where + ": expected 4 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) {
        throw DataError(where + ": empty field");
      }
    }
    if (!ids.insert(fields[0]).second) {
      throw DataError(where + ": duplicate sample id '" + fields[0] + "'");
    }
    DatasetSample sample{fields[0], base / fields[1], base / fields[2], base / fields[3]};
    for (const auto* p : {&sample.image, &sample.scribbles, &sample.ground_truth}) {
      if (!std::filesystem::exists(*p)) {
        throw DataError(where + ": missing file " + p->string());
      }
    }
    manifest.samples.push_back(std::move(sample));
  }
  return manifest;
}

}  // namespace sl
