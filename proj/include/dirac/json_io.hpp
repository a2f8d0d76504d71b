#pragma once
#include <json.hpp>
#include <string>

#include "dirac/boundary.hpp"
#include "dirac/channels.hpp"
#include "dirac/extensions.hpp"
#include "dirac/inequalities.hpp"
#include "dirac/radial_ode.hpp"

namespace dirac {

using Json = nlohmann::ordered_json;

// complex encoded as [re, im]
Json complex_json(const Cx& z);

Json to_json(const IndexSet& set);
Json to_json(const ChannelClassification& c);
Json to_json(const ConnectionMatrix& cm);
Json to_json(const BoundaryData& bd);
Json to_json(const ExtensionRelation& rel);
Json to_json(const UnitaryParametrization& up);
Json to_json(const EigenvalueResult& res);
Json to_json(const CorpusReport& rep);

// Deterministic dump: floats rendered with %.17g, objects in insertion
// order, two-space indentation. Repeated runs with identical inputs are
// byte-identical.
std::string dump_json17(const Json& j, int indent = 2);

}  // namespace dirac
