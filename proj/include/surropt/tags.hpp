#ifndef SURROPT_TAGS_HPP
#define SURROPT_TAGS_HPP

#include <string>
#include <vector>

namespace surropt {

// Option vocabulary. The strings accepted by the CLI and by the parse_*
// helpers are exactly the tag names below (enum spelling == tag spelling,
// except DesignKind::LHD which is written "lhd").

enum class SurrogateTag {
    RBFcub,
    RBFtps,
    RBFlin,
    MARS,
    POLYlin,
    POLYquad,
    POLYquadr,
    POLYcub,
    POLYcubr,
    MIX_RcM,
    MIX_RcPc,
    MIX_RcPcr,
    MIX_RcPq,
    MIX_RcPqr,
    MIX_RcPcM
};

enum class SamplingTag { CANDloc, CANDglob, SurfMin };

enum class DesignKind { LHD, SLHD, CORNER };

enum class RbfKernel { Cubic, ThinPlate, Linear };

enum class PolyVariant { Lin, Quad, QuadR, Cub, CubR };

std::string to_string(SurrogateTag t);
std::string to_string(SamplingTag t);
std::string to_string(DesignKind t);
std::string to_string(RbfKernel k);
std::string to_string(PolyVariant v);

// Throw config_error listing the valid vocabulary on unknown input.
SurrogateTag parse_surrogate_tag(const std::string& s);
SamplingTag parse_sampling_tag(const std::string& s);
DesignKind parse_design_tag(const std::string& s);

const std::vector<std::string>& surrogate_tag_names();
const std::vector<std::string>& sampling_tag_names();
const std::vector<std::string>& design_tag_names();

bool is_mixture(SurrogateTag t);
std::vector<SurrogateTag> mixture_members(SurrogateTag t);

}  // namespace surropt

#endif
