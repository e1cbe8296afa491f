#pragma once

#include "nervekit/affine1d.hpp"
#include "nervekit/contact.hpp"
#include "nervekit/experiments.hpp"
#include "nervekit/homology.hpp"

#include "json.hpp"

#include <string>

namespace nervekit {

// {"d":2,"n":[2,3],"levels":[[[0,0],[1,0]],...],"tail":{"kind":"periodic","period":2}}
nlohmann::json to_json(const GridIfs& ifs);
GridIfs grid_from_json(const nlohmann::json& j);

// {"kind":"affine1d","levels":[[{"slope":"5/7","offset":"0"},...]],"period":2,"symbols":[..]}
nlohmann::json to_json(const AffineSystem1D& sys);
AffineSystem1D affine_from_json(const nlohmann::json& j);
inline bool is_affine(const nlohmann::json& j) { return j.value("kind", "") == "affine1d"; }

// {"vertices":[labels],"simplices":{"1":[[0,1],..],"2":[..]},"meta":{..}}
nlohmann::json to_json(const Nerve& nerve);

nlohmann::json to_json(const Verdict& verdict);

// {"k":..,"betti":[..],"torsion":[[..]],"method":"snf","verdict_mode":"exact"}
nlohmann::json to_json(const BettiReport& report);

nlohmann::json to_json(const TrialConfig& config);
TrialConfig trial_config_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nervekit
