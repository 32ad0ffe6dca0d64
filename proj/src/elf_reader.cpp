// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "elf_reader.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <optional>

namespace depscan {
namespace {

constexpr std::uint32_t kShtDynsym = 11;
constexpr std::uint32_t kShtGnuVersym = 0x6fffffff;
constexpr std::uint32_t kShtGnuVerneed = 0x6ffffffe;
constexpr std::uint16_t kShnUndef = 0;
constexpr std::uint16_t kVersymHidden = 0x8000;
constexpr std::size_t kEhdrSize = 64;
constexpr std::size_t kShdrSize = 64;
constexpr std::size_t kSymSize = 24;

struct Cursor {
  const std::vector<std::uint8_t>& bytes;

  std::uint16_t u16(std::size_t off) const {
    check(off, 2);
    return static_cast<std::uint16_t>(bytes[off] | bytes[off + 1] << 8);
  }
  std::uint32_t u32(std::size_t off) const {
    check(off, 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = v << 8 | bytes[off + i];
    return v;
  }
  std::uint64_t u64(std::size_t off) const {
    check(off, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = v << 8 | bytes[off + i];
    return v;
  }
  void check(std::size_t off, std::size_t len) const {
    if (off + len < off || off + len > bytes.size())
      throw ElfError("truncated ELF: read of " + std::to_string(len) +
                     " bytes at offset " + std::to_string(off) +
                     " past end of file (" + std::to_string(bytes.size()) +
                     " bytes)");
  }
};

struct Section {
  std::uint32_t type = 0;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
  std::uint32_t link = 0;
  std::uint64_t entsize = 0;
};

// Reads a NUL-terminated name out of a string table section.
std::string strtab_name(const Cursor& c, const Section& strtab,
                        std::uint64_t name_off) {
  if (name_off >= strtab.size)
    throw ElfError("string table offset " + std::to_string(name_off) +
                   " past end of table");
  std::size_t start = strtab.offset + name_off;
  std::size_t end = start;
  std::size_t limit = strtab.offset + strtab.size;
  while (end < limit && c.bytes[end] != 0) ++end;
  if (end == limit) throw ElfError("unterminated string table entry");
  return std::string(c.bytes.begin() + start, c.bytes.begin() + end);
}

}  // namespace

std::set<ImportRef> read_elf_imports(const std::vector<std::uint8_t>& bytes) {
  Cursor c{bytes};
  if (bytes.size() < kEhdrSize) throw ElfError("truncated ELF: file smaller than ELF header");
  static const std::uint8_t kMagic[4] = {0x7f, 'E', 'L', 'F'};
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw ElfError("bad ELF magic");
  if (bytes[4] != 2) throw ElfError("unsupported ELF class (need ELF64)");
  if (bytes[5] != 1)
    throw ElfError("unsupported ELF data encoding (need little-endian)");

  std::uint64_t shoff = c.u64(0x28);
  std::uint16_t shentsize = c.u16(0x3a);
  std::uint16_t shnum = c.u16(0x3c);
  if (shnum == 0) return {};
  if (shentsize < kShdrSize)
    throw ElfError("section header entry size too small");

  std::vector<Section> sections;
  sections.reserve(shnum);
  for (std::uint16_t i = 0; i < shnum; ++i) {
    std::size_t off = shoff + std::size_t{i} * shentsize;
    c.check(off, kShdrSize);
    Section s;
    s.type = c.u32(off + 0x04);
    s.offset = c.u64(off + 0x18);
    s.size = c.u64(off + 0x20);
    s.link = c.u32(off + 0x28);
    s.entsize = c.u64(off + 0x38);
    sections.push_back(s);
  }

  const Section* dynsym = nullptr;
  const Section* versym = nullptr;
  const Section* verneed = nullptr;
  for (const Section& s : sections) {
    if (s.type == kShtDynsym && !dynsym) dynsym = &s;
    if (s.type == kShtGnuVersym && !versym) versym = &s;
    if (s.type == kShtGnuVerneed && !verneed) verneed = &s;
  }
  if (!dynsym) return {};
  if (dynsym->link >= sections.size())
    throw ElfError("dynamic symbol table links to missing string table");
  const Section& dynstr = sections[dynsym->link];
  c.check(dynsym->offset, dynsym->size);
  c.check(dynstr.offset, dynstr.size);

  // Version index -> version name, built from the Verneed/Vernaux chains.
  // Indices 0 and 1 are the reserved "local"/"global" entries and never map
  // to a name.
  std::map<std::uint16_t, std::string> version_names;
  if (verneed) {
    if (verneed->link >= sections.size())
      throw ElfError("version dependency section links to missing string table");
    const Section& verstr = sections[verneed->link];
    std::uint64_t pos = verneed->offset;
    for (;;) {
      c.check(pos, 16);
      std::uint16_t vn_cnt = c.u16(pos + 2);
      std::uint32_t vn_aux = c.u32(pos + 8);
      std::uint32_t vn_next = c.u32(pos + 12);
      std::uint64_t aux = pos + vn_aux;
      for (std::uint16_t i = 0; i < vn_cnt; ++i) {
        c.check(aux, 16);
        std::uint16_t vna_other = c.u16(aux + 6);
        std::uint32_t vna_name = c.u32(aux + 8);
        std::uint32_t vna_next = c.u32(aux + 12);
        version_names[vna_other & ~kVersymHidden] =
            strtab_name(c, verstr, vna_name);
        if (vna_next == 0) break;
        aux += vna_next;
      }
      if (vn_next == 0) break;
      pos += vn_next;
    }
  }

  std::uint64_t sym_entsize = dynsym->entsize ? dynsym->entsize : kSymSize;
  if (sym_entsize < kSymSize)
    throw ElfError("dynamic symbol entry size too small");
  std::uint64_t sym_count = dynsym->size / sym_entsize;
  if (versym) c.check(versym->offset, sym_count * 2);

  std::set<ImportRef> imports;
  for (std::uint64_t i = 0; i < sym_count; ++i) {
    std::size_t off = dynsym->offset + i * sym_entsize;
    std::uint32_t st_name = c.u32(off);
    std::uint16_t st_shndx = c.u16(off + 6);
    if (st_shndx != kShnUndef) continue;
    std::string name = strtab_name(c, dynstr, st_name);
    if (name.empty()) continue;

    ImportRef ref;
    ref.name = name;
    if (versym) {
      std::uint16_t v = c.u16(versym->offset + i * 2);
      v &= static_cast<std::uint16_t>(~kVersymHidden);
      if (v > 1) {
        auto it = version_names.find(v);
        if (it == version_names.end())
          throw ElfError("symbol " + name + " references undeclared version index " +
                         std::to_string(v));
        ref.version_tag = it->second;
      }
    }
    imports.insert(std::move(ref));
  }
  return imports;
}

std::set<ImportRef> read_elf_imports_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ElfError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw ElfError("error reading " + path);
  return read_elf_imports(bytes);
}

}  // namespace depscan
