#pragma once

// Test-only DEX and zip writers, laid out byte-by-byte from the published
// dex/zip formats. They share no code with the parser under test; fixtures
// built here act as the independent reference for frontend assertions.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace testsupport {

using Bytes = std::vector<std::uint8_t>;

inline void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back(v >> 8);
}

inline void put_u32(Bytes& out, std::uint32_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
    out.push_back((v >> 16) & 0xff);
    out.push_back((v >> 24) & 0xff);
}

inline void patch_u32(Bytes& out, std::size_t offset, std::uint32_t v) {
    out[offset] = v & 0xff;
    out[offset + 1] = (v >> 8) & 0xff;
    out[offset + 2] = (v >> 16) & 0xff;
    out[offset + 3] = (v >> 24) & 0xff;
}

inline void put_uleb128(Bytes& out, std::uint32_t v) {
    do {
        std::uint8_t byte = v & 0x7f;
        v >>= 7;
        if (v) byte |= 0x80;
        out.push_back(byte);
    } while (v);
}

// --- declarative fixture specs ---------------------------------------------

struct DexMethodSpec {
    std::string name;
    std::vector<std::string> param_descriptors;  // e.g. {"I", "La/b/C;"}
    std::string return_descriptor = "V";
    bool has_code = true;
    bool with_lines = true;   // emit a debug line program
    bool empty_debug = false; // debug info present but no line entries
};

struct DexFieldSpec {
    std::string name;
    std::string type_descriptor = "I";
};

struct DexClassSpec {
    std::string descriptor;  // "La/b/C;"
    bool is_interface = false;
    std::optional<std::string> source_file;
    bool annotations = false;
    std::vector<DexMethodSpec> methods;
    std::vector<DexFieldSpec> fields;
};

namespace detail {

inline char shorty_char(const std::string& descriptor) {
    char c = descriptor[0];
    if (c == '[') return 'L';
    return c;
}

}  // namespace detail

// Emits a complete .dex image for the given classes.
inline Bytes build_dex(const std::vector<DexClassSpec>& classes,
                       const std::string& version = "035",
                       const std::vector<std::string>& extra_strings = {}) {
    // ---- symbol pools
    std::vector<std::string> strings;
    auto intern_string = [&](const std::string& s) {
        strings.push_back(s);
    };
    std::vector<std::string> types;
    auto intern_type = [&](const std::string& t) { types.push_back(t); };

    struct Proto {
        std::string shorty, ret;
        std::vector<std::string> params;
        bool operator<(const Proto& o) const {
            return std::tie(ret, params) < std::tie(o.ret, o.params);
        }
        bool operator==(const Proto& o) const {
            return ret == o.ret && params == o.params;
        }
    };
    std::vector<Proto> protos;
    struct FieldKey {
        std::string cls, type, name;
        bool operator<(const FieldKey& o) const {
            return std::tie(cls, type, name) < std::tie(o.cls, o.type, o.name);
        }
        bool operator==(const FieldKey& o) const {
            return cls == o.cls && type == o.type && name == o.name;
        }
    };
    struct MethodKey {
        std::string cls, name;
        Proto proto;
        bool operator<(const MethodKey& o) const {
            return std::tie(cls, name, proto) < std::tie(o.cls, o.name, o.proto);
        }
        bool operator==(const MethodKey& o) const {
            return cls == o.cls && name == o.name && proto == o.proto;
        }
    };
    std::vector<FieldKey> field_keys;
    std::vector<MethodKey> method_keys;

    for (const DexClassSpec& cls : classes) {
        intern_type(cls.descriptor);
        if (cls.source_file) intern_string(*cls.source_file);
        for (const DexFieldSpec& f : cls.fields) {
            intern_string(f.name);
            intern_type(f.type_descriptor);
            field_keys.push_back({cls.descriptor, f.type_descriptor, f.name});
        }
        for (const DexMethodSpec& m : cls.methods) {
            intern_string(m.name);
            intern_type(m.return_descriptor);
            Proto proto;
            proto.ret = m.return_descriptor;
            proto.params = m.param_descriptors;
            proto.shorty = std::string(1, detail::shorty_char(m.return_descriptor));
            for (const std::string& p : m.param_descriptors) {
                intern_type(p);
                proto.shorty += detail::shorty_char(p);
            }
            intern_string(proto.shorty);
            protos.push_back(proto);
            method_keys.push_back({cls.descriptor, m.name, proto});
        }
    }
    for (const std::string& s : extra_strings) intern_string(s);
    for (const std::string& t : types) intern_string(t);

    auto unique_sorted = [](auto& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    unique_sorted(strings);
    unique_sorted(types);
    unique_sorted(protos);
    unique_sorted(field_keys);
    unique_sorted(method_keys);

    auto string_index = [&](const std::string& s) -> std::uint32_t {
        return std::lower_bound(strings.begin(), strings.end(), s) -
               strings.begin();
    };
    auto type_index = [&](const std::string& t) -> std::uint32_t {
        return std::lower_bound(types.begin(), types.end(), t) - types.begin();
    };
    auto proto_index = [&](const Proto& p) -> std::uint32_t {
        return std::lower_bound(protos.begin(), protos.end(), p) - protos.begin();
    };
    auto field_index = [&](const FieldKey& k) -> std::uint32_t {
        return std::lower_bound(field_keys.begin(), field_keys.end(), k) -
               field_keys.begin();
    };
    auto method_index = [&](const MethodKey& k) -> std::uint32_t {
        return std::lower_bound(method_keys.begin(), method_keys.end(), k) -
               method_keys.begin();
    };

    // ---- fixed-size index sections
    const std::size_t header_size = 0x70;
    const std::size_t string_ids_off = header_size;
    const std::size_t type_ids_off = string_ids_off + strings.size() * 4;
    const std::size_t proto_ids_off = type_ids_off + types.size() * 4;
    const std::size_t field_ids_off = proto_ids_off + protos.size() * 12;
    const std::size_t method_ids_off = field_ids_off + field_keys.size() * 8;
    const std::size_t class_defs_off = method_ids_off + method_keys.size() * 8;
    const std::size_t data_off = class_defs_off + classes.size() * 32;

    Bytes data;  // grows; offsets are data_off + position
    auto align4 = [&] {
        while ((data_off + data.size()) % 4) data.push_back(0);
    };

    // type_lists for protos with parameters
    std::map<std::vector<std::string>, std::uint32_t> type_list_offsets;
    for (const Proto& p : protos) {
        if (p.params.empty() || type_list_offsets.count(p.params)) continue;
        align4();
        type_list_offsets[p.params] =
            static_cast<std::uint32_t>(data_off + data.size());
        put_u32(data, static_cast<std::uint32_t>(p.params.size()));
        for (const std::string& t : p.params)
            put_u16(data, static_cast<std::uint16_t>(type_index(t)));
    }

    // debug items, code items, class data, annotation directories
    struct ClassLayout {
        std::uint32_t class_data_off = 0;
        std::uint32_t annotations_off = 0;
    };
    std::vector<ClassLayout> layouts(classes.size());

    for (std::size_t c = 0; c < classes.size(); ++c) {
        const DexClassSpec& cls = classes[c];

        if (cls.annotations) {
            align4();
            layouts[c].annotations_off =
                static_cast<std::uint32_t>(data_off + data.size());
            // annotations_directory_item with empty tables
            put_u32(data, 0);  // class_annotations_off
            put_u32(data, 0);  // fields_size
            put_u32(data, 0);  // annotated_methods_size
            put_u32(data, 0);  // annotated_parameters_size
        }

        std::vector<std::uint32_t> code_offsets(cls.methods.size(), 0);
        for (std::size_t m = 0; m < cls.methods.size(); ++m) {
            const DexMethodSpec& method = cls.methods[m];
            if (!method.has_code) continue;

            std::uint32_t debug_off = 0;
            if (method.with_lines || method.empty_debug) {
                debug_off = static_cast<std::uint32_t>(data_off + data.size());
                put_uleb128(data, 1);  // line_start
                put_uleb128(data, 0);  // parameters_size
                if (method.with_lines) data.push_back(0x0a);  // special: emit line
                data.push_back(0x00);  // DBG_END_SEQUENCE
            }

            align4();
            code_offsets[m] = static_cast<std::uint32_t>(data_off + data.size());
            put_u16(data, 1);  // registers_size
            put_u16(data, 1);  // ins_size
            put_u16(data, 0);  // outs_size
            put_u16(data, 0);  // tries_size
            put_u32(data, debug_off);
            put_u32(data, 1);       // insns_size (code units)
            put_u16(data, 0x000e);  // return-void
        }

        layouts[c].class_data_off =
            static_cast<std::uint32_t>(data_off + data.size());
        put_uleb128(data, 0);  // static fields
        put_uleb128(data, static_cast<std::uint32_t>(cls.fields.size()));
        put_uleb128(data, static_cast<std::uint32_t>(cls.methods.size()));
        put_uleb128(data, 0);  // virtual methods

        std::uint32_t previous = 0;
        std::vector<std::uint32_t> field_indices;
        for (const DexFieldSpec& f : cls.fields)
            field_indices.push_back(
                field_index({cls.descriptor, f.type_descriptor, f.name}));
        std::sort(field_indices.begin(), field_indices.end());
        for (std::uint32_t idx : field_indices) {
            put_uleb128(data, idx - previous);
            previous = idx;
            put_uleb128(data, 0x0002);  // ACC_PRIVATE
        }

        struct MethodEntry {
            std::uint32_t index;
            std::uint32_t code_off;
        };
        std::vector<MethodEntry> method_entries;
        for (std::size_t m = 0; m < cls.methods.size(); ++m) {
            const DexMethodSpec& method = cls.methods[m];
            Proto proto;
            proto.ret = method.return_descriptor;
            proto.params = method.param_descriptors;
            proto.shorty = std::string(1, detail::shorty_char(method.return_descriptor));
            for (const std::string& p : method.param_descriptors)
                proto.shorty += detail::shorty_char(p);
            method_entries.push_back(
                {method_index({cls.descriptor, method.name, proto}),
                 code_offsets[m]});
        }
        std::sort(method_entries.begin(), method_entries.end(),
                  [](const MethodEntry& a, const MethodEntry& b) {
                      return a.index < b.index;
                  });
        previous = 0;
        for (const MethodEntry& entry : method_entries) {
            put_uleb128(data, entry.index - previous);
            previous = entry.index;
            put_uleb128(data, 0x0001);  // ACC_PUBLIC
            put_uleb128(data, entry.code_off);
        }
    }

    // string data
    std::vector<std::uint32_t> string_data_offsets;
    for (const std::string& s : strings) {
        string_data_offsets.push_back(
            static_cast<std::uint32_t>(data_off + data.size()));
        put_uleb128(data, static_cast<std::uint32_t>(s.size()));
        data.insert(data.end(), s.begin(), s.end());
        data.push_back(0);
    }

    // ---- assemble
    Bytes out;
    out.reserve(data_off + data.size());
    const char* magic = "dex\n";
    out.insert(out.end(), magic, magic + 4);
    out.insert(out.end(), version.begin(), version.end());
    out.push_back(0);
    put_u32(out, 0);  // checksum (unverified by readers here)
    for (int i = 0; i < 20; ++i) out.push_back(0);  // signature
    put_u32(out, static_cast<std::uint32_t>(data_off + data.size()));  // file size
    put_u32(out, 0x70);        // header size
    put_u32(out, 0x12345678);  // endian tag
    put_u32(out, 0);           // link_size
    put_u32(out, 0);           // link_off
    put_u32(out, 0);           // map_off
    put_u32(out, static_cast<std::uint32_t>(strings.size()));
    put_u32(out, static_cast<std::uint32_t>(string_ids_off));
    put_u32(out, static_cast<std::uint32_t>(types.size()));
    put_u32(out, static_cast<std::uint32_t>(type_ids_off));
    put_u32(out, static_cast<std::uint32_t>(protos.size()));
    put_u32(out, static_cast<std::uint32_t>(proto_ids_off));
    put_u32(out, static_cast<std::uint32_t>(field_keys.size()));
    put_u32(out, static_cast<std::uint32_t>(field_ids_off));
    put_u32(out, static_cast<std::uint32_t>(method_keys.size()));
    put_u32(out, static_cast<std::uint32_t>(method_ids_off));
    put_u32(out, static_cast<std::uint32_t>(classes.size()));
    put_u32(out, static_cast<std::uint32_t>(class_defs_off));
    put_u32(out, static_cast<std::uint32_t>(data.size()));  // data_size
    put_u32(out, static_cast<std::uint32_t>(data_off));

    for (std::uint32_t off : string_data_offsets) put_u32(out, off);
    for (const std::string& t : types) put_u32(out, string_index(t));
    for (const Proto& p : protos) {
        put_u32(out, string_index(p.shorty));
        put_u32(out, type_index(p.ret));
        put_u32(out, p.params.empty() ? 0 : type_list_offsets.at(p.params));
    }
    for (const FieldKey& f : field_keys) {
        put_u16(out, static_cast<std::uint16_t>(type_index(f.cls)));
        put_u16(out, static_cast<std::uint16_t>(type_index(f.type)));
        put_u32(out, string_index(f.name));
    }
    for (const MethodKey& m : method_keys) {
        put_u16(out, static_cast<std::uint16_t>(type_index(m.cls)));
        put_u16(out, static_cast<std::uint16_t>(proto_index(m.proto)));
        put_u32(out, string_index(m.name));
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const DexClassSpec& cls = classes[c];
        put_u32(out, type_index(cls.descriptor));
        put_u32(out, cls.is_interface ? 0x0200u : 0x0001u);
        put_u32(out, 0xffffffff);  // superclass: none
        put_u32(out, 0);           // interfaces_off
        put_u32(out, cls.source_file ? string_index(*cls.source_file)
                                     : 0xffffffff);
        put_u32(out, layouts[c].annotations_off);
        put_u32(out, layouts[c].class_data_off);
        put_u32(out, 0);  // static_values_off
    }
    out.insert(out.end(), data.begin(), data.end());
    return out;
}

// --- minimal stored-entry zip writer ------------------------------------------

inline std::uint32_t crc32_of(const Bytes& bytes) {
    static std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xffffffffu;
    for (std::uint8_t b : bytes) crc = table[(crc ^ b) & 0xff] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

struct ZipEntrySpec {
    std::string name;
    Bytes bytes;
};

inline Bytes build_zip(const std::vector<ZipEntrySpec>& entries) {
    Bytes out;
    struct Central {
        std::string name;
        std::uint32_t crc, size, offset;
    };
    std::vector<Central> centrals;
    for (const ZipEntrySpec& entry : entries) {
        Central central{entry.name, crc32_of(entry.bytes),
                        static_cast<std::uint32_t>(entry.bytes.size()),
                        static_cast<std::uint32_t>(out.size())};
        put_u32(out, 0x04034b50);
        put_u16(out, 20);  // version needed
        put_u16(out, 0);   // flags
        put_u16(out, 0);   // method: stored
        put_u16(out, 0);   // mod time
        put_u16(out, 0);   // mod date
        put_u32(out, central.crc);
        put_u32(out, central.size);  // compressed
        put_u32(out, central.size);  // uncompressed
        put_u16(out, static_cast<std::uint16_t>(entry.name.size()));
        put_u16(out, 0);  // extra len
        out.insert(out.end(), entry.name.begin(), entry.name.end());
        out.insert(out.end(), entry.bytes.begin(), entry.bytes.end());
        centrals.push_back(central);
    }
    const std::uint32_t cd_offset = static_cast<std::uint32_t>(out.size());
    for (const Central& central : centrals) {
        put_u32(out, 0x02014b50);
        put_u16(out, 20);  // version made by
        put_u16(out, 20);  // version needed
        put_u16(out, 0);   // flags
        put_u16(out, 0);   // method
        put_u16(out, 0);   // time
        put_u16(out, 0);   // date
        put_u32(out, central.crc);
        put_u32(out, central.size);
        put_u32(out, central.size);
        put_u16(out, static_cast<std::uint16_t>(central.name.size()));
        put_u16(out, 0);  // extra
        put_u16(out, 0);  // comment
        put_u16(out, 0);  // disk
        put_u16(out, 0);  // internal attrs
        put_u32(out, 0);  // external attrs
        put_u32(out, central.offset);
        out.insert(out.end(), central.name.begin(), central.name.end());
    }
    const std::uint32_t cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;
    put_u32(out, 0x06054b50);
    put_u16(out, 0);  // disk
    put_u16(out, 0);  // cd disk
    put_u16(out, static_cast<std::uint16_t>(entries.size()));
    put_u16(out, static_cast<std::uint16_t>(entries.size()));
    put_u32(out, cd_size);
    put_u32(out, cd_offset);
    put_u16(out, 0);  // comment length
    return out;
}

}  // namespace testsupport
