#ifndef PMOL_FORMAT_HPP
#define PMOL_FORMAT_HPP

#include <cstdio>
#include <string>

namespace pmol {

// Shortest decimal string that round-trips a double exactly (17 significant
// digits). All file formats and CSV emitters use this so that rereads and
// repeated runs are bit-stable.
inline std::string fmt_g17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace pmol

#endif
