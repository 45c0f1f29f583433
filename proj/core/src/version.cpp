#include "fraclab/version.hpp"

#include <boost/version.hpp>
#include <fftw3.h>

#ifndef FRACLAB_VERSION
#define FRACLAB_VERSION "unknown"
#endif

namespace fraclab {

std::string version()
{
    return FRACLAB_VERSION;
}

std::vector<std::pair<std::string, std::string>> component_versions()
{
    return {
        {"fraclab", version()},
        {"fftw", fftw_version},
        {"boost", BOOST_LIB_VERSION},
        {"compiler", __VERSION__},
    };
}

} // namespace fraclab
