// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "usage.hpp"

namespace depscan {

// Raised when a binary is not a well-formed 64-bit little-endian ELF file
// (bad magic, wrong class/encoding, or a section that runs past the end of
// the file).  A missing dynamic symbol table is not an error; it simply
// yields an empty import set.
class ElfError : public std::runtime_error {
public:
  explicit ElfError(const std::string& what) : std::runtime_error(what) {}
};

// Extracts the undefined dynamic symbols of an ELF binary, paired with their
// symbol-version tags when the binary carries GNU version metadata.  The
// result is the set of symbols the binary expects its shared libraries to
// provide.
std::set<ImportRef> read_elf_imports(const std::vector<std::uint8_t>& bytes);

// Reads the file at `path` and extracts its imports.  Throws ElfError if the
// file cannot be read or is not a valid ELF64 little-endian binary.
std::set<ImportRef> read_elf_imports_file(const std::string& path);

}  // namespace depscan
