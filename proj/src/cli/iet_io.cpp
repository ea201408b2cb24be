#include "ietlab/cli/iet_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "ietlab/errors.hpp"

namespace ietlab {

namespace {

struct RawPiece {
  std::string src_id;
  QuadNum src_start, length;
  std::string dst_id;
  QuadNum dst_start;
  std::size_t line = 0;
};

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line, long radicand) : text_(text), line_(line), radicand_(radicand) {}

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip();
    return pos_ == text_.size();
  }

  std::string word(const char* what) {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  QuadNum number(const char* what) {
    skip();
    const std::size_t start = pos_;
    auto value = QuadNum::parse_prefix(text_, pos_);
    if (!value) fail(std::string("expected a number literal for ") + what, start);
    if (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])))
      fail(std::string("malformed number literal for ") + what, start);
    if (!value->is_rational() && value->radicand() != radicand_)
      fail("number uses sqrt(" + std::to_string(value->radicand()) + ") but the file declares sqrt(" +
               std::to_string(radicand_) + ")",
           start);
    return *value;
  }

  void expect(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing text");
  }

  [[noreturn]] void fail(const std::string& what) const { fail(what, pos_); }
  [[noreturn]] void fail(const std::string& what, std::size_t at) const { throw ParseError(what, line_, at + 1); }

  void set_radicand(long d) { radicand_ = d; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  long radicand_;
};

RawPiece read_piece(Cursor& c, std::size_t line) {
  RawPiece p;
  p.line = line;
  p.src_id = c.word("a source component id");
  p.src_start = c.number("the piece start");
  p.length = c.number("the piece length");
  c.expect("->");
  p.dst_id = c.word("a target component id");
  p.dst_start = c.number("the image start");
  c.finish();
  return p;
}

std::size_t resolve(const Domain& d, const std::string& id, std::size_t line) {
  if (auto i = d.find(id)) return *i;
  throw ParseError("unknown component id '" + id + "'", line, 1);
}

std::vector<Piece> resolve_pieces(const Domain& src, const Domain& dst, const std::vector<RawPiece>& raw) {
  std::vector<Piece> out;
  for (const auto& p : raw)
    out.push_back(Piece{resolve(src, p.src_id, p.line), p.src_start, p.length, resolve(dst, p.dst_id, p.line), p.dst_start});
  return out;
}

Iet build(const Domain& src, const Domain& dst, const std::vector<RawPiece>& raw, const char* what) {
  try {
    return Iet(src, dst, resolve_pieces(src, dst, raw));
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("invalid ") + what + ": " + e.what());
  }
}

long detect_radicand(const Iet& h) {
  auto check = [](const QuadNum& x) -> std::optional<long> {
    if (!x.is_rational()) return x.radicand();
    return std::nullopt;
  };
  for (std::size_t c = 0; c < h.source().size(); ++c)
    if (auto d = check(h.source().length(c))) return *d;
  for (const auto& p : h.pieces())
    for (const QuadNum* x : {&p.src_start, &p.length, &p.dst_start})
      if (auto d = check(*x)) return *d;
  return kDefaultRadicand;
}

void write_components(std::ostringstream& out, const Domain& d) {
  for (const auto& c : d.components())
    out << "  " << (c.is_circle() ? "circle " : "interval ") << c.id << ' ' << c.length.str() << '\n';
}

void write_pieces(std::ostringstream& out, const Iet& h, const char* indent) {
  for (const auto& p : h.pieces())
    out << indent << "piece " << h.source()[p.src_component].id << ' ' << p.src_start.str() << ' ' << p.length.str()
        << " -> " << h.target()[p.dst_component].id << ' ' << p.dst_start.str() << '\n';
}

}  // namespace

IetFile parse_iet_file(std::string_view text) {
  enum class State { kStart, kHeader, kDomain, kTarget, kPieces, kCert };
  State state = State::kStart;
  IetFile file;
  std::vector<Component> source, target;
  bool has_target = false;
  std::optional<Domain> src_domain, dst_domain;
  std::vector<RawPiece> pieces;

  struct CertDraft {
    std::vector<std::pair<std::string, std::pair<QuadNum, QuadNum>>> arcs;
    std::optional<QuadNum> angle;
    std::optional<Component> circle;
    std::vector<RawPiece> pieces;
    std::size_t line = 0;
  };
  std::optional<CertDraft> cert;

  auto freeze_domains = [&](std::size_t line) {
    if (src_domain) return;
    if (source.empty()) throw ParseError("no domain components before the first piece", line, 1);
    try {
      src_domain = Domain(source);
      dst_domain = has_target ? Domain(target) : *src_domain;
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string("invalid domain: ") + e.what());
    }
  };

  bool map_built = false;
  auto build_map = [&] {
    if (map_built) return;
    file.map = build(*src_domain, *dst_domain, pieces, "transformation");
    map_built = true;
  };

  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Cursor c(line, line_no, file.radicand);
    if (c.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string key = c.word("a directive");

    if (state == State::kStart) {
      if (key != "field") c.fail("the file must start with 'field sqrt(D)'");
      c.skip();
      const std::string spec = c.word("sqrt(D)");
      if (spec.size() < 7 || spec.rfind("sqrt(", 0) != 0 || spec.back() != ')') c.fail("expected sqrt(D)");
      try {
        file.radicand = std::stol(spec.substr(5, spec.size() - 6));
      } catch (const std::exception&) {
        c.fail("expected an integer radicand");
      }
      if (!is_valid_radicand(file.radicand)) c.fail("radicand must be a square-free integer >= 2");
      c.finish();
      state = State::kHeader;
    } else if (key == "field") {
      c.fail("duplicate 'field' line");
    } else if (state == State::kCert) {
      if (key == "arc") {
        std::string id = c.word("a component id");
        QuadNum start = c.number("the arc start");
        QuadNum len = c.number("the arc length");
        c.finish();
        cert->arcs.push_back({std::move(id), {std::move(start), std::move(len)}});
      } else if (key == "angle") {
        cert->angle = c.number("the angle");
        c.finish();
      } else if (key == "circle") {
        std::string id = c.word("a circle id");
        QuadNum len = c.number("the circle length");
        c.finish();
        cert->circle = Component{ComponentKind::kCircle, std::move(len), std::move(id)};
      } else if (key == "piece") {
        cert->pieces.push_back(read_piece(c, line_no));
      } else if (key == "end") {
        c.finish();
        if (!cert->angle || !cert->circle) throw ParseError("circle-cert needs 'angle' and 'circle' lines", line_no, 1);
        std::vector<Arc> arcs;
        for (const auto& [id, range] : cert->arcs)
          arcs.push_back(Arc{resolve(*src_domain, id, cert->line), range.first, range.second});
        Subdomain part;
        try {
          part = Subdomain(*src_domain, arcs);
        } catch (const InvalidArgument& e) {
          throw InvalidArgument(std::string("invalid circle-cert subdomain: ") + e.what());
        }
        Domain conj_src = restriction_domain(part);
        Domain conj_dst({*cert->circle});
        file.circle_certs.push_back(
            IrrationalCircleCert{part, build(conj_src, conj_dst, cert->pieces, "circle-cert conjugator"), *cert->angle});
        cert.reset();
        state = State::kPieces;
      } else {
        c.fail("unknown directive '" + key + "' inside circle-cert");
      }
    } else if (key == "domain" || key == "target") {
      c.finish();
      if (state != State::kHeader && state != State::kDomain) c.fail("'" + key + "' block after pieces");
      if (key == "domain" && (state == State::kDomain || !source.empty())) c.fail("duplicate 'domain' block");
      if (key == "target") {
        if (state != State::kDomain || has_target) c.fail("'target' must follow the domain block once");
        has_target = true;
        state = State::kTarget;
      } else {
        state = State::kDomain;
      }
    } else if (key == "circle" || key == "interval") {
      if (state != State::kDomain && state != State::kTarget) c.fail("component outside a domain block");
      std::string id = c.word("a component id");
      QuadNum len = c.number("the component length");
      c.finish();
      (state == State::kTarget ? target : source)
          .push_back(Component{key == "circle" ? ComponentKind::kCircle : ComponentKind::kInterval, std::move(len), std::move(id)});
    } else if (key == "piece") {
      if (state == State::kHeader) c.fail("piece before the domain block");
      if (state != State::kPieces) {
        freeze_domains(line_no);
        state = State::kPieces;
      }
      pieces.push_back(read_piece(c, line_no));
    } else if (key == "circle-cert") {
      c.finish();
      if (state != State::kPieces) c.fail("circle-cert before the pieces");
      build_map();
      cert = CertDraft{};
      cert->line = line_no;
      state = State::kCert;
    } else {
      c.fail("unknown directive '" + key + "'");
    }
    if (end == text.size()) break;
  }
  if (state == State::kStart) throw ParseError("empty file: expected 'field sqrt(D)'", 1, 1);
  if (state == State::kCert) throw ParseError("unterminated circle-cert block", line_no, 1);
  if (state != State::kPieces) {
    // A domain without pieces is only valid when empty.
    freeze_domains(line_no);
  }
  build_map();
  return file;
}

Iet parse_iet(std::string_view text) { return parse_iet_file(text).map; }

std::string serialize_iet_file(const IetFile& file) {
  std::ostringstream out;
  out << "field sqrt(" << file.radicand << ")\n";
  out << "domain\n";
  write_components(out, file.map.source());
  if (!(file.map.target() == file.map.source())) {
    out << "target\n";
    write_components(out, file.map.target());
  }
  write_pieces(out, file.map, "");
  for (const auto& cert : file.circle_certs) {
    out << "circle-cert\n";
    for (const auto& a : cert.subdomain.maximal_arcs())
      out << "  arc " << file.map.source()[a.component].id << ' ' << a.start.str() << ' ' << a.length.str() << '\n';
    out << "  angle " << cert.angle.str() << '\n';
    const auto& circle = cert.conjugator.target()[0];
    out << "  circle " << circle.id << ' ' << circle.length.str() << '\n';
    write_pieces(out, cert.conjugator, "  ");
    out << "end\n";
  }
  return out.str();
}

std::string serialize_iet(const Iet& h) { return serialize_iet_file(IetFile{detect_radicand(h), h, {}}); }

IetFile read_iet_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_iet_file(buffer.str());
  } catch (const ParseError& e) {
    // The message already carries the position.
    throw ParseError(path.string() + ": " + e.what(), 0, 0);
  }
}

void write_iet_file(const std::filesystem::path& path, const IetFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << serialize_iet_file(file);
}

void write_iet(const std::filesystem::path& path, const Iet& h) {
  write_iet_file(path, IetFile{detect_radicand(h), h, {}});
}

}  // namespace ietlab
