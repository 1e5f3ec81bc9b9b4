#pragma once

#include <stdexcept>
#include <string>

namespace strocbench {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input document is not syntactically valid (e.g. broken JSON, bad magic).
class MalformedDocument : public Error {
public:
    explicit MalformedDocument(const std::string& what) : Error(what) {}
};

// Document parsed but violates the schema or a type invariant. The message
// names the offending field path.
class SchemaViolation : public Error {
public:
    explicit SchemaViolation(const std::string& what) : Error(what) {}
};

class EmptyInput : public Error {
public:
    explicit EmptyInput(const std::string& what) : Error(what) {}
};

class MismatchedVideo : public Error {
public:
    explicit MismatchedVideo(const std::string& what) : Error(what) {}
};

class FrameOutOfRange : public Error {
public:
    explicit FrameOutOfRange(const std::string& what) : Error(what) {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

class EmptyMask : public Error {
public:
    explicit EmptyMask(const std::string& what) : Error(what) {}
};

class BoxOutOfBounds : public Error {
public:
    explicit BoxOutOfBounds(const std::string& what) : Error(what) {}
};

class NegativeInput : public Error {
public:
    explicit NegativeInput(const std::string& what) : Error(what) {}
};

class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

// ROC construction needs at least one positive and one negative record.
class DegenerateLabels : public Error {
public:
    explicit DegenerateLabels(const std::string& what) : Error(what) {}
};

// A spatial curve was requested but a positive record carries no TARR.
class MissingTarr : public Error {
public:
    explicit MissingTarr(const std::string& what) : Error(what) {}
};

// Detector output does not cover every retained video/frame.
class CoverageGap : public Error {
public:
    explicit CoverageGap(const std::string& what) : Error(what) {}
};

class InconsistentDims : public Error {
public:
    explicit InconsistentDims(const std::string& what) : Error(what) {}
};

class InvalidSpec : public Error {
public:
    explicit InvalidSpec(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace strocbench
