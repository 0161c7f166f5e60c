#ifndef KMLMP_IO_HPP
#define KMLMP_IO_HPP

#include <string>

#include "json.hpp"
#include "kmlmp/certifier.hpp"
#include "kmlmp/core_model.hpp"
#include "kmlmp/solver.hpp"

namespace kmlmp {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);
Instance load_instance(const std::string& path);
void save_json(const Json& j, const std::string& path, int indent = 2);

Json to_json(const DualGrowthResult& g);
Json to_json(const NestedQIS& q);
Json to_json(const ClientCase& c);
Json to_json(const CaseAccounting& acc);
Json to_json(const LmpOutcome& out, bool with_duals = false, bool with_nqis = false);
Json to_json(const CellVerdict& v);
Json to_json(const CertReport& rep, bool all_cells = false);
Json to_json(const OracleReport& rep);
Json to_json(const SolverParams& p);

}  // namespace kmlmp

#endif  // KMLMP_IO_HPP
