#include "stableheat/errors.hpp"

#include <sstream>

namespace stableheat {

std::string describe(const Witness& w) {
    std::ostringstream os;
    os.precision(17);
    os << w.property << " at t=" << w.t << " x=" << w.x << " u=" << w.u << " v=" << w.v;
    return os.str();
}

}  // namespace stableheat
