#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "morphoseq/model.hpp"
#include "morphoseq/tokenizer.hpp"

namespace morphoseq {

/// Everything needed to run a trained model.
struct Model {
  ModelConfig config;
  Vocabulary vocab;
  ModelParams params;
};

inline constexpr std::string_view kCheckpointMagic = "MORPHOSEQ-CHECKPOINT";
inline constexpr int kCheckpointVersion = 1;

/// Layout: magic line, `version=N` line, key=value header lines (dimensions,
/// mode, one `token=<kind>\t<text>` line per vocabulary entry in index order),
/// an `end_header` line, then for each tensor: u32 name length, name bytes,
/// u64 rows, u64 cols and rows*cols little-endian IEEE-754 doubles, row-major.
/// The file ends with the 4 bytes "EOF!".
void save_checkpoint(std::ostream& out, const Model& model);
void save_checkpoint_file(const std::string& path, const Model& model);

/// Throws CheckpointError (BadMagic, VersionMismatch, Truncated, ShapeMismatch, Malformed).
Model load_checkpoint(std::istream& in);
Model load_checkpoint_file(const std::string& path);

/// As above, and additionally requires the stored vocabulary to equal `expected`
/// (ShapeMismatch otherwise).
Model load_checkpoint(std::istream& in, const Vocabulary& expected);

}  // namespace morphoseq
