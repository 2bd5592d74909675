#pragma once

#include <sstream>
#include <string>

#include "qfa/intertwiner.hpp"

namespace qfa {

// One line per verification, stable machine-readable shape:
//   CHECK <name> vectors=<n> window=<w> mode=<m> result=PASS|FAIL [witness=..]
struct CheckReport {
    std::string name;
    long vectors = 0;
    long window = 0;
    std::string mode;
    bool pass = true;
    std::string witness;          // empty when pass
    BlockKey max_s_block{0, 0};   // deepest three-slot block demanded
    BlockKey max_j_block{0, 0};   // deepest four-slot block demanded

    std::string line() const {
        std::ostringstream os;
        os << "CHECK " << name << " vectors=" << vectors << " window=" << window
           << " mode=" << mode << " result=" << (pass ? "PASS" : "FAIL");
        if (!witness.empty()) os << " witness=" << witness;
        return os.str();
    }
};

}  // namespace qfa
