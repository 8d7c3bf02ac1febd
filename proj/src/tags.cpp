#include "surropt/tags.hpp"

#include <sstream>

#include "surropt/common.hpp"

namespace surropt {

namespace {

template <typename Tag>
struct TagName {
    Tag tag;
    const char* name;
};

const TagName<SurrogateTag> kSurrogateNames[] = {
    {SurrogateTag::RBFcub, "RBFcub"},       {SurrogateTag::RBFtps, "RBFtps"},
    {SurrogateTag::RBFlin, "RBFlin"},       {SurrogateTag::MARS, "MARS"},
    {SurrogateTag::POLYlin, "POLYlin"},     {SurrogateTag::POLYquad, "POLYquad"},
    {SurrogateTag::POLYquadr, "POLYquadr"}, {SurrogateTag::POLYcub, "POLYcub"},
    {SurrogateTag::POLYcubr, "POLYcubr"},   {SurrogateTag::MIX_RcM, "MIX_RcM"},
    {SurrogateTag::MIX_RcPc, "MIX_RcPc"},   {SurrogateTag::MIX_RcPcr, "MIX_RcPcr"},
    {SurrogateTag::MIX_RcPq, "MIX_RcPq"},   {SurrogateTag::MIX_RcPqr, "MIX_RcPqr"},
    {SurrogateTag::MIX_RcPcM, "MIX_RcPcM"},
};

const TagName<SamplingTag> kSamplingNames[] = {
    {SamplingTag::CANDloc, "CANDloc"},
    {SamplingTag::CANDglob, "CANDglob"},
    {SamplingTag::SurfMin, "SurfMin"},
};

const TagName<DesignKind> kDesignNames[] = {
    {DesignKind::CORNER, "CORNER"},
    {DesignKind::SLHD, "SLHD"},
    {DesignKind::LHD, "lhd"},
};

template <typename Tag, size_t N>
std::string name_of(const TagName<Tag> (&table)[N], Tag t) {
    for (const auto& e : table)
        if (e.tag == t) return e.name;
    return "?";
}

template <typename Tag, size_t N>
Tag parse_of(const TagName<Tag> (&table)[N], const std::string& s, const char* what) {
    for (const auto& e : table)
        if (s == e.name) return e.tag;
    std::ostringstream os;
    os << "unknown " << what << " tag '" << s << "'; valid tags:";
    for (const auto& e : table) os << " " << e.name;
    throw config_error(os.str());
}

template <typename Tag, size_t N>
std::vector<std::string> names_of(const TagName<Tag> (&table)[N]) {
    std::vector<std::string> out;
    for (const auto& e : table) out.emplace_back(e.name);
    return out;
}

}  // namespace

std::string to_string(SurrogateTag t) { return name_of(kSurrogateNames, t); }
std::string to_string(SamplingTag t) { return name_of(kSamplingNames, t); }
std::string to_string(DesignKind t) { return name_of(kDesignNames, t); }

std::string to_string(RbfKernel k) {
    switch (k) {
        case RbfKernel::Cubic: return "cubic";
        case RbfKernel::ThinPlate: return "thin-plate";
        case RbfKernel::Linear: return "linear";
    }
    return "?";
}

std::string to_string(PolyVariant v) {
    switch (v) {
        case PolyVariant::Lin: return "lin";
        case PolyVariant::Quad: return "quad";
        case PolyVariant::QuadR: return "quadr";
        case PolyVariant::Cub: return "cub";
        case PolyVariant::CubR: return "cubr";
    }
    return "?";
}

SurrogateTag parse_surrogate_tag(const std::string& s) {
    return parse_of(kSurrogateNames, s, "surrogate");
}
SamplingTag parse_sampling_tag(const std::string& s) {
    return parse_of(kSamplingNames, s, "sampling");
}
DesignKind parse_design_tag(const std::string& s) {
    return parse_of(kDesignNames, s, "design");
}

const std::vector<std::string>& surrogate_tag_names() {
    static const std::vector<std::string> v = names_of(kSurrogateNames);
    return v;
}
const std::vector<std::string>& sampling_tag_names() {
    static const std::vector<std::string> v = names_of(kSamplingNames);
    return v;
}
const std::vector<std::string>& design_tag_names() {
    static const std::vector<std::string> v = names_of(kDesignNames);
    return v;
}

bool is_mixture(SurrogateTag t) {
    switch (t) {
        case SurrogateTag::MIX_RcM:
        case SurrogateTag::MIX_RcPc:
        case SurrogateTag::MIX_RcPcr:
        case SurrogateTag::MIX_RcPq:
        case SurrogateTag::MIX_RcPqr:
        case SurrogateTag::MIX_RcPcM: return true;
        default: return false;
    }
}

std::vector<SurrogateTag> mixture_members(SurrogateTag t) {
    using S = SurrogateTag;
    switch (t) {
        case S::MIX_RcM: return {S::RBFcub, S::MARS};
        case S::MIX_RcPc: return {S::RBFcub, S::POLYcub};
        case S::MIX_RcPcr: return {S::RBFcub, S::POLYcubr};
        case S::MIX_RcPq: return {S::RBFcub, S::POLYquad};
        case S::MIX_RcPqr: return {S::RBFcub, S::POLYquadr};
        case S::MIX_RcPcM: return {S::RBFcub, S::POLYcub, S::MARS};
        default: throw config_error("not a mixture tag: " + to_string(t));
    }
}

}  // namespace surropt
