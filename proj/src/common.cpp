#include "geomineq/common.hpp"

#include <sstream>

namespace geomineq {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace geomineq
