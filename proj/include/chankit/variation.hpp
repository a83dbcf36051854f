#pragma once

#include "chankit/channel_model.hpp"

namespace chankit {

/// An ordered stack of constraint sets, one per parameter or protocol layer.
struct SystemOfConstraints {
    std::string id;
    std::vector<ConstraintSet> layers;
};

struct LayerVariation {
    std::string layer_id;
    std::uint64_t t = 0;
    std::uint64_t r = 0;
    std::uint64_t n = 0;
    double v_bits = 0.0;
    double s_bound_bits = 0.0;
    bool included = true;  // not ignored and not fault
};

struct VariationReport {
    std::vector<LayerVariation> per_layer;
    double total_v_bits = 0.0;   // sum over included layers only
    std::size_t excluded_count = 0;
};

/// V = |log2 r - log2 t|. Throws domain_error when either count is zero.
double variation_bits(std::uint64_t t, std::uint64_t r);

/// Per-layer V for every layer; the total sums only layers that are neither
/// ignored nor flagged as faults. Throws validation_error naming the first
/// invalid layer.
VariationReport system_variation(const SystemOfConstraints& sys);

}  // namespace chankit
