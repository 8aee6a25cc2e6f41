#pragma once

#include <array>
#include <string>

#include "dhne/model.hpp"

namespace dhne {

// Versioned text container for trained parameters. Values are written with 17
// significant digits, so load(save(p)) reproduces every entry exactly.
struct Snapshot {
    std::array<std::string, 3> type_names;
    DhneParams params;
};

void save_snapshot(const DhneParams& params, const std::array<std::string, 3>& type_names,
                   const std::string& path);
Snapshot load_snapshot(const std::string& path);

// Writes via a temp file in the same directory followed by a rename.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace dhne
