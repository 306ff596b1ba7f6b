#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sl {

struct DatasetSample {
  std::string id;
  std::filesystem::path image;
  std::filesystem::path scribbles;
  std::filesystem::path ground_truth;
};

struct DatasetManifest {
  std::filesystem::path source;
  std::vector<DatasetSample> samples;
};

/// Parses a tab-separated manifest, one `<id> <image> <scribbles> <groundtruth>`
/// record per line. `#` lines and blank lines are skipped; relative paths are
/// resolved against the manifest's directory. Every referenced file must exist
/// and ids must be unique, otherwise DataError.
DatasetManifest load_dataset(const std::filesystem::path& manifest_path);

}  // namespace sl
