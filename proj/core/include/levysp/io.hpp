#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "levysp/estimators.hpp"
#include "levysp/sampler.hpp"

namespace levysp {

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

/// `# key=value` metadata lines, then `index,value`.
void write_path_csv(std::ostream& out, const SamplePath& path);
SamplePath read_path_csv(std::istream& in);

/// `# key=value` metadata lines, then `index,value,noisy` with one row per
/// observation; `value` is the noiseless sample when known, empty otherwise.
void write_observations_csv(std::ostream& out, const Observations& obs, const SamplePath* truth = nullptr);
Observations read_observations_csv(std::istream& in);

/// `index,estimate` over the fine grid.
void write_result_csv(std::ostream& out, const DenoiseResult& result);

/// One `node_<k>.csv` per node holding its posterior density.
void write_marginals(const std::filesystem::path& dir, const DenoiseResult& result);

}  // namespace levysp
