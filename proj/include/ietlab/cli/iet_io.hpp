#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ietlab/core/iet.hpp"
#include "ietlab/rotations/rotations.hpp"

namespace ietlab {

/// Contents of one .iet file.
///
///   field sqrt(D)
///   domain
///     circle <id> <len>
///     interval <id> <len>
///   target                      (optional; defaults to the domain)
///     ...
///   piece <src_id> <start> <len> -> <dst_id> <start>
///   circle-cert                 (zero or more)
///     arc <id> <start> <len>
///     angle <lit>
///     circle <id> <len>         (target circle of the conjugator)
///     piece ...                 (conjugator; sources use restriction ids)
///   end
///
/// '#' starts a comment. Numbers use the literal grammar of QuadNum, and every
/// irrational number must use the declared D.
struct IetFile {
  long radicand = kDefaultRadicand;
  Iet map;
  std::vector<IrrationalCircleCert> circle_certs;
};

/// Throws ParseError (with line and column) on syntax errors and
/// InvalidArgument on semantic ones, such as pieces that do not partition.
IetFile parse_iet_file(std::string_view text);
Iet parse_iet(std::string_view text);

/// Canonical text; parse_iet_file(serialize_iet_file(f)) reproduces f and
/// serializing that again gives the same bytes.
std::string serialize_iet_file(const IetFile& file);
/// Declares the radicand of the first irrational number, else D = 2.
std::string serialize_iet(const Iet& h);

IetFile read_iet_file(const std::filesystem::path& path);
void write_iet_file(const std::filesystem::path& path, const IetFile& file);
void write_iet(const std::filesystem::path& path, const Iet& h);

}  // namespace ietlab
