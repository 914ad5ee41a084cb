#ifndef HISTOCLUST_ERRORS_HPP
#define HISTOCLUST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace histoclust {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// histogram construction
struct EmptyBins : Error {
    EmptyBins() : Error("histogram has no bins") {}
};
struct NonContiguousBins : Error {
    explicit NonContiguousBins(const std::string& m) : Error(m) {}
};
struct NonPositiveWeight : Error {
    explicit NonPositiveWeight(const std::string& m) : Error(m) {}
};
struct WeightSumMismatch : Error {
    explicit WeightSumMismatch(const std::string& m) : Error(m) {}
};
struct EmptySamples : Error {
    EmptySamples() : Error("cannot build a histogram from zero samples") {}
};
struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& m) : Error(m) {}
};

// distances
struct ZeroDispersion : Error {
    ZeroDispersion() : Error("r_qq undefined: one of the histograms has zero standard deviation") {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& m) : Error(m) {}
};
struct InvalidCluster : Error {
    explicit InvalidCluster(const std::string& m) : Error(m) {}
};

// clustering
struct EmptyCluster : Error {
    EmptyCluster() : Error("prototype requested for an empty cluster") {}
};
struct KTooLarge : Error {
    explicit KTooLarge(const std::string& m) : Error(m) {}
};

// evaluation
struct DegenerateK : Error {
    explicit DegenerateK(const std::string& m) : Error(m) {}
};
struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& m) : Error(m) {}
};

// generation
struct InfeasibleMoments : Error {
    explicit InfeasibleMoments(const std::string& m) : Error(m) {}
};

// io
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(m) {}
};
struct InvalidRunSpec : Error {
    explicit InvalidRunSpec(const std::string& m) : Error(m) {}
};

}  // namespace histoclust

#endif
