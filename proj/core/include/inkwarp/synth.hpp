#pragma once

// Procedural stand-ins for hand-drawn staged originals: simple line-art
// characters whose later stages only add strokes to earlier ones.

#include "inkwarp/image.hpp"
#include "inkwarp/plan.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace inkwarp {

/// Giraffe: A body, B + mane and tail, C + spots.
/// Flower:  A center and stem, B + petals (no C).
/// Dragon:  A body, B + back spikes, C + wings.
enum class Character { Giraffe, Flower, Dragon };

std::string_view to_string(Character c);
/// Throws Error for unknown names.
Character parse_character(std::string_view name);

/// Stage images for drawing number `index`; deterministic in (kind, index, size).
StageImages synth_drawing(Character kind, int index, int size = 256);

/// Writes `<name>NN_A.png`, `_B.png` (and `_C.png`) for NN = 01..count into
/// `dir` and returns the tuples.
std::vector<StageTuple> write_synth_set(Character kind, int count,
                                        const std::filesystem::path& dir, int size = 256);

} // namespace inkwarp
