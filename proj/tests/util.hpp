#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ukcm/family.hpp"

#ifndef UKCM_SOURCE_DIR
#define UKCM_SOURCE_DIR "."
#endif

namespace testutil {

inline std::string corpus_path(const std::string& file) {
    return std::string(UKCM_SOURCE_DIR) + "/corpus/" + file;
}

inline ukcm::UpdateFamily load_family(char cls) {
    std::ifstream f(corpus_path(std::string("family_") + cls + ".fam"));
    if (!f) throw std::runtime_error("missing corpus family file");
    return ukcm::parse_family(f);
}

}  // namespace testutil
