#pragma once

#include <filesystem>
#include <vector>

#include "miner/charmetrics.hpp"
#include "miner/csv.hpp"
#include "miner/taxonomy.hpp"

namespace miner {

// Profile CSV: user_id, one frequency column per taxonomy category, I, S,
// the seven selfie measures (undefined as an empty field), then the sparse
// flag and the occurrence counts used by the task filters.
csv::Table profiles_table(const std::vector<UserProfile>& profiles, const Taxonomy& taxonomy);
std::vector<UserProfile> profiles_from_table(const csv::Table& table, const Taxonomy& taxonomy);

void save_profiles(const std::vector<UserProfile>& profiles, const Taxonomy& taxonomy,
                   const std::filesystem::path& path);
std::vector<UserProfile> load_profiles(const std::filesystem::path& path, const Taxonomy& taxonomy);

}  // namespace miner
