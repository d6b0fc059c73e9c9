#pragma once

#include <stdexcept>
#include <string>

namespace nirdehaze {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// image_io
class DecodeError : public Error { public: using Error::Error; };
class UnsupportedFormat : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

// shared across modules
class DimensionMismatch : public Error { public: using Error::Error; };
class EmptyInput : public Error { public: using Error::Error; };

// wavelet
class TooManyLevels : public Error { public: using Error::Error; };
class CorruptPyramid : public Error { public: using Error::Error; };

// fusion
class PyramidMismatch : public Error { public: using Error::Error; };

// metrics
class DegenerateInput : public Error { public: using Error::Error; };
class TooSmall : public Error { public: using Error::Error; };
class NoVisibleEdges : public Error { public: using Error::Error; };

// cli / batch
class ManifestParseError : public Error { public: using Error::Error; };

}  // namespace nirdehaze
