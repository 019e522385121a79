#pragma once

#include <stdexcept>
#include <string>

namespace weather {

// Base class for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Bytes are not a decodable PNG/JPEG/BMP image.
class DecodeError : public Error {
public:
    using Error::Error;
};

// An input is too small for the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A parameter is outside its documented range.
class ParamError : public Error {
public:
    using Error::Error;
};

// Feature schema or model format mismatch.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Malformed CSV content; the message names the offending line.
class CsvError : public Error {
public:
    using Error::Error;
};

}  // namespace weather
