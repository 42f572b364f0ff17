#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coevo/distill/change.hpp"
#include "coevo/java/entity.hpp"

namespace coevo::distill {

// Token-overlap threshold at or above which two statements are paired as an update.
inline constexpr double kStatementMatchThreshold = 0.6;

// Dice coefficient over the token multisets of two normalized texts.
double token_similarity(const std::string& a, const std::string& b);

// Distills the semantic changes between two versions of one file.
//
// Either tree may be absent (file added or removed) but not both. Adding or
// removing a class emits the class change plus one method change per method
// it contains, recursively through nested classes. Output is sorted by
// (file_path, parent_qualified_name, change_type), stable otherwise.
std::vector<SourceChange> distill(const java::EntityNode* before, const java::EntityNode* after,
                                  const std::string& file_path, const std::string& commit_id);

}  // namespace coevo::distill
