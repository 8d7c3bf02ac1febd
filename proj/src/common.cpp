#include "surropt/common.hpp"

#include <iostream>

namespace surropt {

void warn(const std::string& msg) {
    std::cerr << "[surropt] warning: " << msg << "\n";
}

}  // namespace surropt
