#pragma once

#include <stdexcept>
#include <string>

namespace glyphgrow {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid UTF-8 input; message names file and byte offset.
struct DecodeError : Error {
    using Error::Error;
};

// Tensor shape mismatch or invalid dimension arithmetic.
struct ShapeError : Error {
    using Error::Error;
};

// backward() called again on an already-consumed graph.
struct StaleGraphError : Error {
    using Error::Error;
};

// Two vocab entries produced byte-identical embedding rows.
struct RowCollisionError : Error {
    using Error::Error;
};

// Embedding fingerprint or vocab size mismatch between artifacts.
struct SubstrateError : Error {
    using Error::Error;
};

// Config or file parse failure; message carries line number / offset.
struct ParseError : Error {
    using Error::Error;
};

// Training loss went NaN; message names the last good checkpoint.
struct DivergenceError : Error {
    using Error::Error;
};

// Loss was requested over zero non-ignored targets.
struct UndefinedLossError : Error {
    using Error::Error;
};

// Generic I/O failure with path context.
struct IoError : Error {
    using Error::Error;
};

}  // namespace glyphgrow
