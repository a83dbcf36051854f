#include "chankit/variation.hpp"

#include <cmath>
#include <unordered_set>

namespace chankit {

double variation_bits(std::uint64_t t, std::uint64_t r) {
    if (t == 0 || r == 0) {
        throw domain_error("variation requires element counts >= 1 (got t=" + std::to_string(t) +
                           ", r=" + std::to_string(r) + ")");
    }
    return std::abs(entropy_bound(r) - entropy_bound(t));
}

VariationReport system_variation(const SystemOfConstraints& sys) {
    if (sys.layers.empty()) {
        throw validation_error("system '" + sys.id + "' has no layers (x must be >= 1)");
    }
    std::unordered_set<std::string> ids;
    for (const auto& layer : sys.layers) {
        if (!ids.insert(layer.id).second) {
            throw validation_error("system '" + sys.id + "' repeats layer id '" + layer.id + "'");
        }
        if (auto violations = validate(layer); !violations.empty()) {
            throw validation_error("layer '" + layer.id + "' is invalid: " + violations.front());
        }
    }

    VariationReport report;
    for (const auto& layer : sys.layers) {
        LayerVariation row;
        row.layer_id = layer.id;
        row.t = layer.tx.count();
        row.r = layer.rx.count();
        row.n = layer.n();
        row.v_bits = variation_bits(row.t, row.r);
        row.s_bound_bits = entropy_bound(row.n);
        row.included = !(layer.ignored || layer.fault);
        if (row.included) {
            report.total_v_bits += row.v_bits;
        } else {
            ++report.excluded_count;
        }
        report.per_layer.push_back(std::move(row));
    }
    return report;
}

}  // namespace chankit
