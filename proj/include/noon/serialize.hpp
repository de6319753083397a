#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "noon/fock.hpp"
#include "noon/herald.hpp"
#include "noon/homodyne.hpp"

namespace noon {

using json = nlohmann::json;

/// {cutoff, mode_count, re: [[..]], im: [[..]]} — the interchange format for
/// density operators everywhere in this project.
json density_to_json(const DensityOp& rho);
DensityOp density_from_json(const json& j);

/// {probability, state, null_herald}
json herald_to_json(const HeraldOutcome& h);
HeraldOutcome herald_from_json(const json& j);

/// CSV with header mode_id,theta_rad,x (12 significant digits).
std::string dataset_to_csv(const QuadratureDataset& d);
QuadratureDataset dataset_from_csv(const std::string& csv);

/// CSV with header theta_a_rad,x_a,theta_b_rad,x_b.
std::string joint_dataset_to_csv(const JointQuadratureDataset& d);
JointQuadratureDataset joint_dataset_from_csv(const std::string& csv);

/// Fixed 12-significant-digit formatting used for all numeric CSV output.
std::string format_double(double v);

std::string sha256_hex(const std::string& bytes);

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace noon
