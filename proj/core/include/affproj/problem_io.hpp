#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "affproj/mmup.hpp"

namespace affproj {

// One row per line, comma-separated decimals. Blank lines are ignored.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);

struct ProblemFile {
  mmup::PencilData pencil;
  mmup::TargetSpectrum targets;
};

// {"M": ..., "D": ..., "K": ..., "targets": [{"mu_re", "mu_im", "y_re", "y_im"}]}
// Matrices are nested arrays, or strings naming a CSV file relative to
// `base_dir`. A target with mu_im != 0 denotes a conjugate pair unless
// "conjugate": false is given.
ProblemFile parse_problem_json(const std::string& text,
                               const std::filesystem::path& base_dir = {});
ProblemFile load_problem_json(const std::filesystem::path& path);

}  // namespace affproj
