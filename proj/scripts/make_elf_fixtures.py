#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2026 The depscan authors
"""Assembles the golden ELF fixtures used by the import-reader tests.

Each fixture is a minimal but structurally honest ELF64 little-endian
object: real section header table, real .dynsym/.dynstr, and (for the
versioned fixture) real .gnu.version/.gnu.version_r chains. The generated
bytes are committed; regenerating must be byte-identical. Cross-check any
regeneration with `readelf --dyn-syms -V` before committing.
"""

import struct
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "elf"

SHT_PROGBITS = 1
SHT_STRTAB = 3
SHT_DYNSYM = 11
SHT_GNU_VERNEED = 0x6FFFFFFE
SHT_GNU_VERSYM = 0x6FFFFFFF

SHN_UNDEF = 0
SHN_ABS = 0xFFF1

STB_GLOBAL = 1
STT_OBJECT = 1
STT_FUNC = 2


def elf_hash(name: bytes) -> int:
    h = 0
    for ch in name:
        h = (h << 4) + ch
        g = h & 0xF0000000
        if g:
            h ^= g >> 24
        h &= ~g & 0xFFFFFFFF
    return h


class StrTab:
    def __init__(self):
        self.data = b"\x00"
        self.offsets = {"": 0}

    def add(self, s: str) -> int:
        if s not in self.offsets:
            self.offsets[s] = len(self.data)
            self.data += s.encode() + b"\x00"
        return self.offsets[s]


def sym(st_name, info, shndx, value=0, size=0):
    return struct.pack("<IBBHQQ", st_name, info, 0, shndx, value, size)


def ehdr(shoff, shnum, shstrndx, phnum):
    ident = b"\x7fELF" + bytes([2, 1, 1, 0]) + b"\x00" * 8
    return struct.pack(
        "<16sHHIQQQIHHHHHH",
        ident,
        3,  # ET_DYN
        0x3E,  # EM_X86_64
        1,
        0,  # e_entry
        64 if phnum else 0,  # e_phoff: right after the header
        shoff,
        0,
        64,  # e_ehsize
        56 if phnum else 0,
        phnum,
        64,  # e_shentsize
        shnum,
        shstrndx,
    )


def phdr_load(filesz):
    # Identity-mapped PT_LOAD so vaddr == file offset for every section.
    return struct.pack("<IIQQQQQQ", 1, 5, 0, 0, 0, filesz, filesz, 0x1000)


def shdr(name_off, sh_type, offset, size, link=0, info=0, entsize=0, flags=0, align=1, addr=0):
    return struct.pack(
        "<IIQQQQIIQQ", name_off, sh_type, flags, addr, offset, size, link, info, align, entsize
    )


SHF_ALLOC = 2
SHT_DYNAMIC = 6


def build(sections, dynamic=False):
    """sections: list of (name, sh_type, payload, link, info, entsize).

    A payload may be (size, fill_fn); fill_fn receives {section: offset}
    once the layout is fixed and returns the bytes. Section 0 is the
    implicit NULL entry; the final section must be .shstrtab. All sections
    but .shstrtab are allocated with vaddr == file offset so ELF dumpers
    can resolve them; with dynamic=True a PT_DYNAMIC covers '.dynamic'.
    """
    shstr = StrTab()
    for name, *_ in sections:
        shstr.add(name)
    payloads = [payload for _, _, payload, _, _, _ in sections]
    # .shstrtab payload itself:
    assert sections[-1][0] == ".shstrtab"
    payloads[-1] = shstr.data

    phnum = 2 if dynamic else 1
    offset = 64 + 56 * phnum
    offsets = {}
    for (name, *_), payload in zip(sections, payloads):
        offsets[name] = offset
        offset += payload[0] if isinstance(payload, tuple) else len(payload)
    shoff = offset

    filled = []
    for payload in payloads:
        if isinstance(payload, tuple):
            size, fill = payload
            data = fill(offsets)
            assert len(data) == size
            filled.append(data)
        else:
            filled.append(payload)

    headers = [shdr(0, 0, 0, 0)]  # NULL
    for (name, sh_type, _, link, info, entsize), payload in zip(sections, filled):
        alloc = SHF_ALLOC if name != ".shstrtab" else 0
        off = offsets[name]
        headers.append(
            shdr(shstr.add(name), sh_type, off, len(payload), link, info, entsize,
                 flags=alloc, addr=off if alloc else 0)
        )

    blob = ehdr(shoff, len(headers), len(headers) - 1, phnum)
    blob += phdr_load(shoff + 64 * len(headers))
    if dynamic:
        dyn_off = offsets[".dynamic"]
        dyn_size = len(filled[[s[0] for s in sections].index(".dynamic")])
        # PT_DYNAMIC: type=2, flags=R
        blob += struct.pack("<IIQQQQQQ", 2, 4, dyn_off, dyn_off, dyn_off,
                            dyn_size, dyn_size, 8)
    for payload in filled:
        blob += payload
    for h in headers:
        blob += h
    return blob


DT_NULL = 0
DT_STRTAB = 5
DT_SYMTAB = 6
DT_STRSZ = 10
DT_SYMENT = 11
DT_VERSYM = 0x6FFFFFF0
DT_VERNEED = 0x6FFFFFFE
DT_VERNEEDNUM = 0x6FFFFFFF


def dyn_tag(tag, value):
    return struct.pack("<QQ", tag, value)


def make_plain():
    """Three undefined imports among two defined exports; no versioning."""
    dynstr = StrTab()
    syms = [sym(0, 0, SHN_UNDEF)]
    for name in ("gzgetc", "gzopen", "free"):
        syms.append(sym(dynstr.add(name), (STB_GLOBAL << 4) | STT_FUNC, SHN_UNDEF))
    for name in ("my_exported", "my_other"):
        syms.append(sym(dynstr.add(name), (STB_GLOBAL << 4) | STT_FUNC, SHN_ABS, value=0x1000))
    dynsym = b"".join(syms)

    sections = [
        (".dynsym", SHT_DYNSYM, dynsym, 2, 1, 24),  # link -> .dynstr
        (".dynstr", SHT_STRTAB, dynstr.data, 0, 0, 0),
        (".shstrtab", SHT_STRTAB, b"", 0, 0, 0),
    ]
    return build(sections)


def make_versioned():
    """Versioned imports: snd_tplg_new@ALSA_0.9, g_free@GLIB_2.0 (with the
    hidden bit set on its versym entry), one unversioned import, one export."""
    dynstr = StrTab()
    syms = [sym(0, 0, SHN_UNDEF)]
    versym = [0]
    syms.append(sym(dynstr.add("snd_tplg_new"), (STB_GLOBAL << 4) | STT_FUNC, SHN_UNDEF))
    versym.append(2)
    syms.append(sym(dynstr.add("g_free"), (STB_GLOBAL << 4) | STT_FUNC, SHN_UNDEF))
    versym.append(3 | 0x8000)  # hidden bit must be masked off by readers
    syms.append(sym(dynstr.add("plain_import"), (STB_GLOBAL << 4) | STT_OBJECT, SHN_UNDEF))
    versym.append(1)  # global: no version
    syms.append(sym(dynstr.add("exported_fn"), (STB_GLOBAL << 4) | STT_FUNC, SHN_ABS, 0x1000))
    versym.append(1)
    dynsym = b"".join(syms)
    versym_payload = b"".join(struct.pack("<H", v) for v in versym)

    # Two Verneed records, one aux each.
    vn1_file = dynstr.add("libasound.so.2")
    vn1_aux = dynstr.add("ALSA_0.9")
    vn2_file = dynstr.add("libglib-2.0.so.0")
    vn2_aux = dynstr.add("GLIB_2.0")
    verneed = b""
    # Verneed: version, cnt, file, aux-offset, next-offset
    verneed += struct.pack("<HHIII", 1, 1, vn1_file, 16, 32)
    verneed += struct.pack("<IHHII", elf_hash(b"ALSA_0.9"), 0, 2, vn1_aux, 0)
    verneed += struct.pack("<HHIII", 1, 1, vn2_file, 16, 0)
    verneed += struct.pack("<IHHII", elf_hash(b"GLIB_2.0"), 0, 3, vn2_aux, 0)

    def fill_dynamic(offsets):
        return b"".join(
            [
                dyn_tag(DT_SYMTAB, offsets[".dynsym"]),
                dyn_tag(DT_SYMENT, 24),
                dyn_tag(DT_STRTAB, offsets[".dynstr"]),
                dyn_tag(DT_STRSZ, len(dynstr.data)),
                dyn_tag(DT_VERSYM, offsets[".gnu.version"]),
                dyn_tag(DT_VERNEED, offsets[".gnu.version_r"]),
                dyn_tag(DT_VERNEEDNUM, 2),
                dyn_tag(DT_NULL, 0),
            ]
        )

    sections = [
        (".dynsym", SHT_DYNSYM, dynsym, 2, 1, 24),
        (".dynstr", SHT_STRTAB, dynstr.data, 0, 0, 0),
        (".gnu.version", SHT_GNU_VERSYM, versym_payload, 1, 0, 2),
        (".gnu.version_r", SHT_GNU_VERNEED, verneed, 2, 2, 0),
        (".dynamic", SHT_DYNAMIC, (8 * 16, fill_dynamic), 2, 0, 16),
        (".shstrtab", SHT_STRTAB, b"", 0, 0, 0),
    ]
    return build(sections, dynamic=True)


def make_nodyn():
    """No dynamic symbol section at all: imports must come back empty."""
    sections = [
        (".text", SHT_PROGBITS, b"\xc3", 0, 0, 0),
        (".shstrtab", SHT_STRTAB, b"", 0, 0, 0),
    ]
    return build(sections)


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, blob in (
        ("plain_imports.so", make_plain()),
        ("versioned_imports.so", make_versioned()),
        ("no_dynamic.o", make_nodyn()),
    ):
        path = OUT_DIR / name
        path.write_bytes(blob)
        print(f"wrote {path} ({len(blob)} bytes)")


if __name__ == "__main__":
    main()
