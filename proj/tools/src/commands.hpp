#ifndef STE_TOOLS_COMMANDS_HPP
#define STE_TOOLS_COMMANDS_HPP

#include <optional>
#include <string>

#include "config.hpp"

namespace ste::cli {

struct CommonArgs {
    std::string config_path;
    std::string protocol_path;  // empty = use the config's protocol block
    std::string out_dir = ".";
    std::optional<Method> method_override;
    int jobs_override = -1;  // -1 = use config
    bool with_trace = false;
    bool dump_final_sigma = false;  // binary full-covariance checkpoint at t_f
};

// Exit codes: 0 success, 1 hard error, 2 completed with warnings.
int cmd_design(const CommonArgs& args, double t_f_flag);
int cmd_simulate(const CommonArgs& args);
int cmd_sweep(const CommonArgs& args);
int cmd_validate(const CommonArgs& args);

}  // namespace ste::cli

#endif
