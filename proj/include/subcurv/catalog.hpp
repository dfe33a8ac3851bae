#pragma once

#include "subcurv/config.hpp"

namespace subcurv {

// Built-in example runs.  Each entry is a plain RunConfig; `catalog run`
// behaves exactly like `verify` on the equivalent config file.
struct CatalogEntry {
    std::string name;
    std::string summary;
    RunConfig config;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);  // MissingField if unknown

// The warped-product example takes the mixing angle as a parameter.
RunConfig girmednh_config(const std::string& alpha = "pi/4");

}  // namespace subcurv
