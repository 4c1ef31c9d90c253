#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#if __has_include(<zlib.h>)
#include <zlib.h>
#define OBFKIT_HAVE_ZLIB 1
#endif

#include "obfkit/app_model.hpp"
#include "obfkit/errors.hpp"

namespace obfkit::dex {

using Bytes = std::vector<std::uint8_t>;

constexpr std::uint32_t kNoIndex = 0xffffffff;
constexpr std::uint32_t kAccInterface = 0x0200;
constexpr std::size_t kHeaderSize = 0x70;
constexpr std::size_t kMaxEntryBytes = std::size_t(1) << 30;  // zip-bomb guard

// --- bounds-checked little-endian reads -------------------------------------

class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t size, std::string section)
        : data_(data), size_(size), section_(std::move(section)) {}

    ByteReader(const Bytes& bytes, std::string section)
        : ByteReader(bytes.data(), bytes.size(), std::move(section)) {}

    std::size_t size() const noexcept { return size_; }

    void require(std::size_t offset, std::size_t count) const {
        if (offset > size_ || count > size_ - offset)
            throw ParseError("truncated read of " + std::to_string(count) +
                                 " bytes",
                             offset, section_);
    }

    std::uint8_t u8(std::size_t offset) const {
        require(offset, 1);
        return data_[offset];
    }

    std::uint16_t u16(std::size_t offset) const {
        require(offset, 2);
        return static_cast<std::uint16_t>(data_[offset]) |
               static_cast<std::uint16_t>(data_[offset + 1]) << 8;
    }

    std::uint32_t u32(std::size_t offset) const {
        require(offset, 4);
        return static_cast<std::uint32_t>(data_[offset]) |
               static_cast<std::uint32_t>(data_[offset + 1]) << 8 |
               static_cast<std::uint32_t>(data_[offset + 2]) << 16 |
               static_cast<std::uint32_t>(data_[offset + 3]) << 24;
    }

    const std::uint8_t* at(std::size_t offset, std::size_t count) const {
        require(offset, count);
        return data_ + offset;
    }

    // NUL-terminated byte run (MUTF-8 payload is kept verbatim).
    std::string cstring(std::size_t offset) const {
        std::size_t end = offset;
        while (true) {
            require(end, 1);
            if (data_[end] == 0) break;
            ++end;
        }
        return std::string(reinterpret_cast<const char*>(data_ + offset),
                           end - offset);
    }

    const std::string& section() const noexcept { return section_; }

private:
    const std::uint8_t* data_;
    std::size_t size_;
    std::string section_;
};

// Sequential cursor for uleb128-encoded streams.
class Cursor {
public:
    Cursor(const ByteReader& reader, std::size_t offset)
        : reader_(&reader), pos_(offset) {}

    std::size_t pos() const noexcept { return pos_; }

    std::uint8_t u8() { return reader_->u8(pos_++); }

    std::uint32_t uleb128() {
        std::uint32_t value = 0;
        for (int shift = 0; shift < 35; shift += 7) {
            std::uint8_t byte = reader_->u8(pos_++);
            value |= static_cast<std::uint32_t>(byte & 0x7f) << shift;
            if ((byte & 0x80) == 0) return value;
        }
        throw ParseError("uleb128 longer than 5 bytes", pos_, reader_->section());
    }

    std::int32_t sleb128() {
        std::int32_t value = 0;
        int shift = 0;
        std::uint8_t byte;
        do {
            if (shift >= 35)
                throw ParseError("sleb128 longer than 5 bytes", pos_,
                                 reader_->section());
            byte = reader_->u8(pos_++);
            value |= static_cast<std::int32_t>(byte & 0x7f) << shift;
            shift += 7;
        } while (byte & 0x80);
        if (shift < 32 && (byte & 0x40)) value |= -(1 << shift);
        return value;
    }

    // uleb128p1: stored as value+1 so that -1 (absent) encodes as 0.
    std::int64_t uleb128p1() { return static_cast<std::int64_t>(uleb128()) - 1; }

private:
    const ByteReader* reader_;
    std::size_t pos_;
};

// --- descriptor conversion ----------------------------------------------------

// "La/b/C;" -> "a.b.C"; inverse below. Bijective on valid class descriptors.
inline std::string descriptor_to_binary_name(std::string_view desc) {
    if (desc.size() < 3 || desc.front() != 'L' || desc.back() != ';')
        throw ParseError("invalid class descriptor '" + std::string(desc) + "'");
    std::string name(desc.substr(1, desc.size() - 2));
    for (char& c : name)
        if (c == '/') c = '.';
    return name;
}

inline std::string binary_name_to_descriptor(std::string_view name) {
    std::string desc = "L";
    for (char c : name) desc += (c == '.') ? '/' : c;
    desc += ';';
    return desc;
}

// Human-readable form for any type descriptor: "I" -> "int",
// "[La/B;" -> "a.B[]".
inline std::string descriptor_to_readable(std::string_view desc) {
    std::size_t dims = 0;
    while (!desc.empty() && desc.front() == '[') {
        ++dims;
        desc.remove_prefix(1);
    }
    std::string base;
    if (desc == "V") base = "void";
    else if (desc == "Z") base = "boolean";
    else if (desc == "B") base = "byte";
    else if (desc == "S") base = "short";
    else if (desc == "C") base = "char";
    else if (desc == "I") base = "int";
    else if (desc == "J") base = "long";
    else if (desc == "F") base = "float";
    else if (desc == "D") base = "double";
    else base = descriptor_to_binary_name(desc);
    for (std::size_t i = 0; i < dims; ++i) base += "[]";
    return base;
}

// --- single DEX file ------------------------------------------------------------

// The slice of a .dex file the detectors need: identifier tables, class
// definitions and the presence bits for debug info / source files /
// annotations. No instruction decoding.
struct DexFile {
    std::string version;
    std::vector<std::string> strings;
    std::vector<std::string> type_descriptors;
    std::vector<ClassRecord> classes;
};

namespace detail {

struct ProtoInfo {
    std::string return_type;
    std::vector<std::string> param_types;
};

inline void check_table(const ByteReader& r, std::uint32_t size,
                        std::uint32_t off, std::size_t item_bytes,
                        const char* what) {
    if (size == 0) return;
    if (off > r.size() ||
        static_cast<std::uint64_t>(size) * item_bytes > r.size() - off)
        throw ParseError(std::string(what) + " table out of bounds", off,
                         r.section());
}

// Runs the debug line program only far enough to see whether any source-line
// position is emitted.
inline bool debug_info_emits_lines(const ByteReader& r, std::uint32_t offset) {
    Cursor cur(r, offset);
    cur.uleb128();  // line_start
    std::uint32_t parameters = cur.uleb128();
    if (parameters > r.size())
        throw ParseError("debug parameter count out of bounds", offset,
                         r.section());
    for (std::uint32_t i = 0; i < parameters; ++i) cur.uleb128p1();
    while (true) {
        std::uint8_t opcode = cur.u8();
        switch (opcode) {
            case 0x00: return false;  // end of sequence, no line emitted
            case 0x01: cur.uleb128(); break;
            case 0x02: cur.sleb128(); break;
            case 0x03:
                cur.uleb128();
                cur.uleb128p1();
                cur.uleb128p1();
                break;
            case 0x04:
                cur.uleb128();
                cur.uleb128p1();
                cur.uleb128p1();
                cur.uleb128p1();
                break;
            case 0x05:
            case 0x06: cur.uleb128(); break;
            case 0x07:
            case 0x08: break;
            case 0x09: cur.uleb128p1(); break;
            default: return true;  // special opcode: a line table entry
        }
    }
}

}  // namespace detail

inline bool looks_like_dex(const Bytes& bytes) {
    return bytes.size() >= 4 && std::memcmp(bytes.data(), "dex\n", 4) == 0;
}

inline DexFile parse_dex(const Bytes& bytes, const std::string& entry_name) {
    ByteReader r(bytes, entry_name);
    using detail::check_table;

    if (bytes.size() < kHeaderSize)
        throw ParseError("file smaller than dex header", 0, entry_name);
    if (std::memcmp(bytes.data(), "dex\n", 4) != 0)
        throw ParseError("bad magic", 0, entry_name);
    std::string version(reinterpret_cast<const char*>(bytes.data() + 4), 3);
    if (bytes[7] != 0)
        throw ParseError("bad magic terminator", 7, entry_name);
    if (version < "035" || version > "039" ||
        !std::all_of(version.begin(), version.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("unsupported dex version '" + version + "'", 4,
                         entry_name);
    if (r.u32(40) != 0x12345678)
        throw ParseError("unsupported endianness", 40, entry_name);

    DexFile dex;
    dex.version = version;

    const std::uint32_t string_ids_size = r.u32(56);
    const std::uint32_t string_ids_off = r.u32(60);
    const std::uint32_t type_ids_size = r.u32(64);
    const std::uint32_t type_ids_off = r.u32(68);
    const std::uint32_t proto_ids_size = r.u32(72);
    const std::uint32_t proto_ids_off = r.u32(76);
    const std::uint32_t field_ids_size = r.u32(80);
    const std::uint32_t field_ids_off = r.u32(84);
    const std::uint32_t method_ids_size = r.u32(88);
    const std::uint32_t method_ids_off = r.u32(92);
    const std::uint32_t class_defs_size = r.u32(96);
    const std::uint32_t class_defs_off = r.u32(100);

    check_table(r, string_ids_size, string_ids_off, 4, "string_ids");
    check_table(r, type_ids_size, type_ids_off, 4, "type_ids");
    check_table(r, proto_ids_size, proto_ids_off, 12, "proto_ids");
    check_table(r, field_ids_size, field_ids_off, 8, "field_ids");
    check_table(r, method_ids_size, method_ids_off, 8, "method_ids");
    check_table(r, class_defs_size, class_defs_off, 32, "class_defs");

    dex.strings.reserve(string_ids_size);
    for (std::uint32_t i = 0; i < string_ids_size; ++i) {
        std::uint32_t data_off = r.u32(string_ids_off + std::size_t(i) * 4);
        Cursor cur(r, data_off);
        cur.uleb128();  // utf16 length; payload read to its NUL instead
        dex.strings.push_back(r.cstring(cur.pos()));
    }

    auto string_at = [&](std::uint32_t idx, const char* what) -> const std::string& {
        if (idx >= dex.strings.size())
            throw ParseError(std::string(what) + " string index out of range",
                             idx, entry_name);
        return dex.strings[idx];
    };

    dex.type_descriptors.reserve(type_ids_size);
    for (std::uint32_t i = 0; i < type_ids_size; ++i)
        dex.type_descriptors.push_back(
            string_at(r.u32(type_ids_off + std::size_t(i) * 4), "type_id"));

    auto type_at = [&](std::uint32_t idx, const char* what) -> const std::string& {
        if (idx >= dex.type_descriptors.size())
            throw ParseError(std::string(what) + " type index out of range", idx,
                             entry_name);
        return dex.type_descriptors[idx];
    };

    std::vector<detail::ProtoInfo> protos;
    protos.reserve(proto_ids_size);
    for (std::uint32_t i = 0; i < proto_ids_size; ++i) {
        std::size_t base = proto_ids_off + std::size_t(i) * 12;
        detail::ProtoInfo proto;
        proto.return_type = descriptor_to_readable(type_at(r.u32(base + 4), "proto"));
        std::uint32_t params_off = r.u32(base + 8);
        if (params_off != 0) {
            std::uint32_t count = r.u32(params_off);
            check_table(r, count, params_off + 4, 2, "type_list");
            for (std::uint32_t p = 0; p < count; ++p)
                proto.param_types.push_back(descriptor_to_readable(
                    type_at(r.u16(params_off + 4 + std::size_t(p) * 2), "param")));
        }
        protos.push_back(std::move(proto));
    }

    struct FieldId {
        std::string name, type;
    };
    struct MethodId {
        std::string name;
        std::uint32_t proto_idx;
    };
    std::vector<FieldId> field_ids;
    field_ids.reserve(field_ids_size);
    for (std::uint32_t i = 0; i < field_ids_size; ++i) {
        std::size_t base = field_ids_off + std::size_t(i) * 8;
        field_ids.push_back(
            {string_at(r.u32(base + 4), "field name"),
             descriptor_to_readable(type_at(r.u16(base + 2), "field type"))});
    }
    std::vector<MethodId> method_ids;
    method_ids.reserve(method_ids_size);
    for (std::uint32_t i = 0; i < method_ids_size; ++i) {
        std::size_t base = method_ids_off + std::size_t(i) * 8;
        std::uint32_t proto_idx = r.u16(base + 2);
        if (proto_idx >= protos.size())
            throw ParseError("method proto index out of range", base, entry_name);
        method_ids.push_back({string_at(r.u32(base + 4), "method name"), proto_idx});
    }

    dex.classes.reserve(class_defs_size);
    for (std::uint32_t i = 0; i < class_defs_size; ++i) {
        std::size_t base = class_defs_off + std::size_t(i) * 32;
        ClassRecord cls;
        cls.qualified_name =
            descriptor_to_binary_name(type_at(r.u32(base), "class_def"));
        cls.is_interface = (r.u32(base + 4) & kAccInterface) != 0;
        std::uint32_t source_file_idx = r.u32(base + 16);
        if (source_file_idx != kNoIndex)
            cls.source_file = string_at(source_file_idx, "source_file");
        cls.annotations_present = r.u32(base + 20) != 0;

        std::uint32_t class_data_off = r.u32(base + 24);
        if (class_data_off != 0) {
            Cursor cur(r, class_data_off);
            std::uint32_t static_fields = cur.uleb128();
            std::uint32_t instance_fields = cur.uleb128();
            std::uint32_t direct_methods = cur.uleb128();
            std::uint32_t virtual_methods = cur.uleb128();
            const std::uint64_t members =
                std::uint64_t(static_fields) + instance_fields + direct_methods +
                virtual_methods;
            if (members > r.size())
                throw ParseError("class_data member count out of bounds",
                                 class_data_off, entry_name);

            std::uint32_t field_idx = 0;
            for (std::uint32_t f = 0; f < static_fields + instance_fields; ++f) {
                if (f == 0 || f == static_fields) field_idx = 0;
                field_idx += cur.uleb128();
                cur.uleb128();  // access flags
                if (field_idx >= field_ids.size())
                    throw ParseError("encoded field index out of range",
                                     cur.pos(), entry_name);
                cls.fields.push_back(
                    {field_ids[field_idx].name, field_ids[field_idx].type});
            }
            std::uint32_t method_idx = 0;
            for (std::uint32_t m = 0; m < direct_methods + virtual_methods; ++m) {
                if (m == 0 || m == direct_methods) method_idx = 0;
                method_idx += cur.uleb128();
                cur.uleb128();  // access flags
                std::uint32_t code_off = cur.uleb128();
                if (method_idx >= method_ids.size())
                    throw ParseError("encoded method index out of range",
                                     cur.pos(), entry_name);
                const MethodId& id = method_ids[method_idx];
                MethodRecord method;
                method.name = id.name;
                method.param_types = protos[id.proto_idx].param_types;
                method.return_type = protos[id.proto_idx].return_type;
                method.has_code = code_off != 0;
                if (code_off != 0) {
                    std::uint32_t debug_off = r.u32(code_off + 8);
                    if (debug_off != 0)
                        method.has_line_numbers =
                            detail::debug_info_emits_lines(r, debug_off);
                }
                cls.methods.push_back(std::move(method));
            }
        }
        dex.classes.push_back(std::move(cls));
    }
    return dex;
}

// --- zip container ----------------------------------------------------------------

struct ZipEntry {
    std::string name;
    Bytes bytes;
};

namespace detail {

#ifdef OBFKIT_HAVE_ZLIB
inline Bytes inflate_raw(const std::uint8_t* data, std::size_t size,
                         std::size_t expected, const std::string& name) {
    Bytes out(expected);
    z_stream stream{};
    if (inflateInit2(&stream, -MAX_WBITS) != Z_OK)
        throw ParseError("zlib init failed", std::nullopt, name);
    stream.next_in = const_cast<Bytef*>(data);
    stream.avail_in = static_cast<uInt>(size);
    stream.next_out = out.data();
    stream.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&stream, Z_FINISH);
    std::size_t produced = out.size() - stream.avail_out;
    inflateEnd(&stream);
    if (rc != Z_STREAM_END || produced != expected)
        throw ParseError("corrupt deflate stream", std::nullopt, name);
    return out;
}
#endif

inline Bytes read_zip_entry(const ByteReader& r, std::size_t local_off,
                            std::uint16_t method, std::uint32_t comp_size,
                            std::uint32_t uncomp_size, const std::string& name) {
    if (uncomp_size > kMaxEntryBytes || comp_size > kMaxEntryBytes)
        throw ParseError("zip entry too large", local_off, name);
    if (r.u32(local_off) != 0x04034b50)
        throw ParseError("bad local file header", local_off, name);
    std::uint16_t name_len = r.u16(local_off + 26);
    std::uint16_t extra_len = r.u16(local_off + 28);
    std::size_t data_off = local_off + 30 + name_len + extra_len;
    const std::uint8_t* data = r.at(data_off, comp_size);
    if (method == 0) {
        if (comp_size != uncomp_size)
            throw ParseError("stored entry size mismatch", data_off, name);
        return Bytes(data, data + comp_size);
    }
    if (method == 8) {
#ifdef OBFKIT_HAVE_ZLIB
        return inflate_raw(data, comp_size, uncomp_size, name);
#else
        throw ParseError("deflate-compressed entry needs zlib", data_off, name);
#endif
    }
    throw ParseError("unsupported zip compression method " +
                         std::to_string(method),
                     data_off, name);
}

}  // namespace detail

inline bool looks_like_zip(const Bytes& bytes) {
    return bytes.size() >= 4 && bytes[0] == 'P' && bytes[1] == 'K';
}

// Reads selected entries of a zip archive via the central directory.
// `want` decides by entry name which payloads get extracted.
template <typename Predicate>
std::vector<ZipEntry> read_zip_entries(const Bytes& bytes, Predicate want) {
    ByteReader r(bytes, "zip");
    if (bytes.size() < 22) throw ParseError("too small for a zip archive", 0, "zip");

    // End-of-central-directory scan from the tail (comment up to 64k).
    std::size_t eocd = std::string::npos;
    std::size_t scan_limit =
        bytes.size() >= 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
    for (std::size_t i = bytes.size() - 22 + 1; i-- > scan_limit;) {
        if (r.u32(i) == 0x06054b50) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string::npos)
        throw ParseError("end of central directory not found", bytes.size(),
                         "zip");

    std::uint16_t entry_count = r.u16(eocd + 10);
    std::uint32_t cd_off = r.u32(eocd + 16);

    std::vector<ZipEntry> out;
    std::size_t pos = cd_off;
    for (std::uint16_t i = 0; i < entry_count; ++i) {
        if (r.u32(pos) != 0x02014b50)
            throw ParseError("bad central directory entry", pos, "zip");
        std::uint16_t method = r.u16(pos + 10);
        std::uint32_t comp_size = r.u32(pos + 20);
        std::uint32_t uncomp_size = r.u32(pos + 24);
        std::uint16_t name_len = r.u16(pos + 28);
        std::uint16_t extra_len = r.u16(pos + 30);
        std::uint16_t comment_len = r.u16(pos + 32);
        std::uint32_t local_off = r.u32(pos + 42);
        std::string name(reinterpret_cast<const char*>(r.at(pos + 46, name_len)),
                         name_len);
        if (want(name))
            out.push_back({name, detail::read_zip_entry(r, local_off, method,
                                                        comp_size, uncomp_size,
                                                        name)});
        pos += 46 + std::size_t(name_len) + extra_len + comment_len;
    }
    return out;
}

// --- container + app assembly --------------------------------------------------

struct DexContainer {
    enum class Source { apk, dex };

    struct Entry {
        std::string name;
        Bytes bytes;
    };

    Source source = Source::dex;
    std::vector<Entry> entries;  // classes.dex, classes2.dex, ... in order
    std::size_t total_bytes = 0;
};

namespace detail {

// classes.dex -> 1, classesN.dex -> N, anything else -> nullopt.
inline std::optional<std::size_t> dex_entry_ordinal(const std::string& name) {
    constexpr std::string_view prefix = "classes";
    constexpr std::string_view suffix = ".dex";
    if (name.size() < prefix.size() + suffix.size()) return std::nullopt;
    if (name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
        return std::nullopt;
    std::string_view digits(name.data() + prefix.size(),
                            name.size() - prefix.size() - suffix.size());
    if (digits.empty()) return 1;
    if (digits[0] == '0' || digits == "1") return std::nullopt;
    std::size_t value = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + static_cast<std::size_t>(c - '0');
        if (value > 1'000'000) return std::nullopt;
    }
    return value;
}

}  // namespace detail

inline DexContainer open_container(const Bytes& bytes) {
    DexContainer container;
    container.total_bytes = bytes.size();
    if (looks_like_dex(bytes)) {
        container.source = DexContainer::Source::dex;
        container.entries.push_back({"classes.dex", bytes});
        return container;
    }
    if (looks_like_zip(bytes)) {
        container.source = DexContainer::Source::apk;
        auto entries = read_zip_entries(bytes, [](const std::string& name) {
            return detail::dex_entry_ordinal(name).has_value();
        });
        std::sort(entries.begin(), entries.end(),
                  [](const ZipEntry& a, const ZipEntry& b) {
                      return *detail::dex_entry_ordinal(a.name) <
                             *detail::dex_entry_ordinal(b.name);
                  });
        for (auto& e : entries)
            container.entries.push_back({std::move(e.name), std::move(e.bytes)});
        if (container.entries.empty())
            throw ParseError("no code: archive has no classes*.dex entry",
                             std::nullopt, "zip");
        return container;
    }
    throw ParseError("not a dex file or zip archive (bad magic)", 0, "container");
}

// One AppModel across all dex entries. Duplicate class names keep the first
// definition, as the platform does; the duplicate is recorded as a warning.
inline AppModel parse_app(const DexContainer& container, std::string app_id,
                          std::optional<std::string> main_package,
                          std::vector<std::string>* warnings = nullptr) {
    AppModel app;
    app.app_id = std::move(app_id);
    app.main_package = std::move(main_package);
    std::set<std::string> seen;
    for (const auto& entry : container.entries) {
        DexFile dex = parse_dex(entry.bytes, entry.name);
        for (ClassRecord& cls : dex.classes) {
            if (!seen.insert(cls.qualified_name).second) {
                if (warnings)
                    warnings->push_back("duplicate class " + cls.qualified_name +
                                        " in " + entry.name + " ignored");
                continue;
            }
            app.classes.push_back(std::move(cls));
        }
    }
    validate(app);
    return app;
}

inline AppModel parse_apk(const Bytes& bytes, std::string app_id,
                          std::optional<std::string> main_package = std::nullopt,
                          std::vector<std::string>* warnings = nullptr) {
    return parse_app(open_container(bytes), std::move(app_id),
                     std::move(main_package), warnings);
}

// --- packer / protector markers -----------------------------------------------

struct ToolMarkerConfig {
    std::vector<std::string> dexprotector_prefixes = {"com.dexprotector"};
    std::vector<std::string> bangcle_prefixes = {"com.secneo", "com.bangcle"};
};

struct ToolMarkerReport {
    bool dexprotector_detected = false;
    bool bangcle_detected = false;
    std::vector<std::string> marker_evidence;
};

namespace detail {

inline bool marker_hit(const std::string& text, const std::string& prefix,
                       const std::string& descriptor_prefix) {
    return text.find(prefix) != std::string::npos ||
           text.find(descriptor_prefix) != std::string::npos;
}

}  // namespace detail

// Scans class names and the full string table of every entry for packer
// package prefixes (both dotted and descriptor spelling).
inline ToolMarkerReport scan_tool_markers(const DexContainer& container,
                                          const ToolMarkerConfig& config = {}) {
    ToolMarkerReport report;
    std::set<std::string> evidence;

    struct Family {
        const std::vector<std::string>* prefixes;
        bool* flag;
    };
    Family families[] = {
        {&config.dexprotector_prefixes, &report.dexprotector_detected},
        {&config.bangcle_prefixes, &report.bangcle_detected},
    };

    for (const auto& entry : container.entries) {
        DexFile dex = parse_dex(entry.bytes, entry.name);
        for (const Family& family : families) {
            for (const std::string& prefix : *family.prefixes) {
                std::string desc_prefix = "L";
                for (char c : prefix) desc_prefix += (c == '.') ? '/' : c;
                for (const ClassRecord& cls : dex.classes)
                    if (detail::marker_hit(cls.qualified_name, prefix, desc_prefix)) {
                        *family.flag = true;
                        evidence.insert(cls.qualified_name);
                    }
                for (const std::string& s : dex.strings)
                    if (detail::marker_hit(s, prefix, desc_prefix)) {
                        *family.flag = true;
                        evidence.insert(s);
                    }
            }
        }
    }
    report.marker_evidence.assign(evidence.begin(), evidence.end());
    return report;
}

}  // namespace obfkit::dex
