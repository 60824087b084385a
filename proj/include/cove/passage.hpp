#pragma once

// Passage segmentation: longform text splits at sentence boundaries, other
// tasks keep the whole response as a single passage. Passages keep their
// original separators, so concatenating them reconstructs the input byte
// for byte.

#include "cove/types.hpp"

#include <string>
#include <vector>

namespace cove {

std::vector<std::string> split_passages(const std::string& text,
                                        TaskKind task_kind);

// Sentence-level split regardless of task; the longform path of
// split_passages and the clipping utility share it.
std::vector<std::string> split_sentences(const std::string& text);

// First n passages of the text, separators preserved; identity when the
// text has n or fewer sentences. n must be >= 1.
std::string clip_sentences(const std::string& text, int n);

}  // namespace cove
