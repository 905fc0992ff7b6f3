#pragma once

#include <stdexcept>
#include <string>

namespace advfeat {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UnreadableFile : public Error {
public:
    using Error::Error;
};

class EmptyImage : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class ImageTooSmall : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InsufficientReference : public Error {
public:
    using Error::Error;
};

class TooFewSamples : public Error {
public:
    using Error::Error;
};

class SingleClass : public Error {
public:
    using Error::Error;
};

class NonFiniteInput : public Error {
public:
    using Error::Error;
};

class SingleClassAuc : public Error {
public:
    using Error::Error;
};

class WrongModelKind : public Error {
public:
    using Error::Error;
};

class ZeroDisplacement : public Error {
public:
    using Error::Error;
};

class CorruptModel : public Error {
public:
    using Error::Error;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace advfeat
