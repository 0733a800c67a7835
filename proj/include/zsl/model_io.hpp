#pragma once

#include <cstdint>
#include <filesystem>

#include "zsl/msas.hpp"
#include "zsl/scc_model.hpp"

namespace zsl {

/// A trained classifier plus what inference needs to rebuild its inputs.
struct ModelArtifact {
    SccModel model;
    Index num_seen = 0;
    Index num_unseen = 0;
    std::uint64_t seed = 0;
    bool msas_enabled = true;
    MsasConfig msas;
};

// model.json manifest plus one ZFB8 file per parameter block.
void save_model(const ModelArtifact& artifact, const std::filesystem::path& dir);
ModelArtifact load_model(const std::filesystem::path& dir);

}  // namespace zsl
