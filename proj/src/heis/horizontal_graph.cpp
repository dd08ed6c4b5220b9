#include "lusin/heis/horizontal_graph.hpp"

#include "lusin/construct/field.hpp"
#include "lusin/construct/multi_stage.hpp"
#include "lusin/core/errors.hpp"

namespace lusin::heis {

HorizontalGraph build_horizontal_graph(const BoxDomain& dom, const BuildConfig& cfg) {
    if (dom.dim() != 2) throw ValidationError("build_horizontal_graph: domain must be planar");
    auto built = multi_stage_build(FieldCollection::catalog("heisenberg", 2, 1), dom, cfg);
    auto fn = std::make_shared<const BumpPolySum>(std::move(built.function));
    return {GraphMap::from_sum(fn, dom), fn, std::move(built.certificate)};
}

}  // namespace lusin::heis
