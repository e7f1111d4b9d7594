#ifndef STE_TOOLS_CONFIG_HPP
#define STE_TOOLS_CONFIG_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ste/model.hpp"
#include "ste/scaling.hpp"

namespace ste::cli {

enum class Method { master, exact, both };

Method method_from_string(const std::string& name);
const char* to_string(Method method);

struct IntegratorConfig {
    double dt = 1e-3;       // exact-benchmark step
    double rtol = 1e-9;     // moment/Ermakov relative tolerance
    int samples = 2000;     // output grid intervals
};

struct SweepConfig {
    std::vector<double> t_f;
    std::vector<std::string> protocols{"ste", "quench", "ramp"};
};

struct RunConfig {
    ModelParams model;
    BathSpec bath;
    Method method = Method::exact;
    IntegratorConfig integrator;
    std::optional<nlohmann::json> protocol;
    SweepConfig sweep;
    int jobs = 0;  // 0 = hardware concurrency
    nlohmann::json resolved;  // full config echoed into output headers
};

// Strict parse: unknown keys are rejected, nested invariants enforced.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& j);

// A protocol specification plus everything the simulators need. For non-STE
// kinds the scaling is obtained by forward integration of the Ermakov
// equation when required.
struct Protocol {
    ProfileKind kind;
    double t_f = 0.0;
    FrequencyProfile profile;
    std::shared_ptr<const Scaling> scaling;  // may be null until realized
    nlohmann::json source;
};

Protocol parse_protocol(const nlohmann::json& j, const ModelParams& params);
Protocol load_protocol(const std::string& path, const ModelParams& params);
// Builds the scaling function (forward Ermakov) if not present yet.
void realize_scaling(Protocol& protocol, const ModelParams& params, double rtol);

}  // namespace ste::cli

#endif
