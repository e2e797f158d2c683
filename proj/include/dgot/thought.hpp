#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dgot {

/// The three graph transformations, in tie-break order.
enum class TransformationKind { generate, aggregate, improve };

std::string_view to_string(TransformationKind kind);
TransformationKind transformation_kind_from_string(std::string_view name);

/// One candidate abstract produced by a single backend query.
/// generate thoughts have no parents, aggregate thoughts have >= 2,
/// improve thoughts have exactly 1. `attempt` is 1-based within its stage.
struct Thought {
    std::string id;
    std::string text;
    std::optional<double> score;
    TransformationKind kind = TransformationKind::generate;
    int attempt = 1;
    std::vector<std::string> parents;
};

} // namespace dgot
