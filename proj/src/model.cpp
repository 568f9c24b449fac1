#include "levilab/model.hpp"

#include <cctype>
#include <sstream>

namespace levilab {

namespace {

struct Pos {
  int line = 1;
  int column = 1;
};

struct Atom {
  std::string text;
  Pos pos;
};

struct Block;
using FieldValue = std::variant<Atom, std::shared_ptr<Block>>;

struct Field {
  std::string key;
  Pos pos;
  std::vector<FieldValue> values;

  const Atom& atom(size_t i) const {
    if (i >= values.size() || !std::holds_alternative<Atom>(values[i]))
      throw ModelError(pos.line, pos.column, "field '" + key + "' expects a value at position " +
                                                 std::to_string(i + 1));
    return std::get<Atom>(values[i]);
  }
  const Block& block(size_t i) const {
    if (i >= values.size() || !std::holds_alternative<std::shared_ptr<Block>>(values[i]))
      throw ModelError(pos.line, pos.column, "field '" + key + "' expects a block");
    return *std::get<std::shared_ptr<Block>>(values[i]);
  }
  bool is_block(size_t i) const {
    return i < values.size() && std::holds_alternative<std::shared_ptr<Block>>(values[i]);
  }
};

struct Block {
  Pos pos;
  std::vector<Field> fields;

  const Field* find(const std::string& key) const {
    for (const auto& f : fields)
      if (f.key == key) return &f;
    return nullptr;
  }
  const Field& need(const std::string& key) const {
    const Field* f = find(key);
    if (!f) throw ModelError(pos.line, pos.column, "missing field '" + key + "'");
    return *f;
  }
  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& f : fields) {
      bool ok = false;
      for (const char* k : keys) ok = ok || f.key == k;
      if (!ok) throw ModelError(f.pos.line, f.pos.column, "unknown field '" + f.key + "'");
    }
  }
};

// --- tokenizer ---

struct Token {
  enum Kind { Ident, Number, LBrace, RBrace, Semi, Colon, End } kind;
  std::string text;
  Pos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip();
    Token t;
    t.pos = pos_;
    if (at_ >= text_.size()) {
      t.kind = Token::End;
      return t;
    }
    const char c = text_[at_];
    if (c == '{') { advance(); t.kind = Token::LBrace; t.text = "{"; return t; }
    if (c == '}') { advance(); t.kind = Token::RBrace; t.text = "}"; return t; }
    if (c == ';') { advance(); t.kind = Token::Semi; t.text = ";"; return t; }
    if (c == ':') { advance(); t.kind = Token::Colon; t.text = ":"; return t; }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Number;
      t.text += c;
      advance();
      while (at_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[at_])) || text_[at_] == '/')) {
        t.text += text_[at_];
        advance();
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Ident;
      while (at_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[at_])) || text_[at_] == '_' ||
              text_[at_] == '-')) {
        t.text += text_[at_];
        advance();
      }
      return t;
    }
    throw ModelError(pos_.line, pos_.column, std::string("unexpected character '") + c + "'");
  }

 private:
  void skip() {
    while (at_ < text_.size()) {
      const char c = text_[at_];
      if (c == '#') {
        while (at_ < text_.size() && text_[at_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (text_[at_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++at_;
  }

  const std::string& text_;
  size_t at_ = 0;
  Pos pos_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { bump(); }

  // file := (kind name block)*
  std::vector<std::tuple<std::string, std::string, Block>> records() {
    std::vector<std::tuple<std::string, std::string, Block>> out;
    while (cur_.kind != Token::End) {
      const Token kind = expect(Token::Ident, "record kind");
      const Token name = expect(Token::Ident, "record name");
      out.emplace_back(kind.text, name.text, block());
    }
    return out;
  }

 private:
  Token cur_;
  Lexer lexer_;

  void bump() { cur_ = lexer_.next(); }
  Token expect(Token::Kind k, const std::string& what) {
    if (cur_.kind != k)
      throw ModelError(cur_.pos.line, cur_.pos.column,
                       "expected " + what + ", found '" + cur_.text + "'");
    Token t = cur_;
    bump();
    return t;
  }

  // block := '{' field* '}'
  Block block() {
    Block b;
    b.pos = cur_.pos;
    expect(Token::LBrace, "'{'");
    while (cur_.kind != Token::RBrace) {
      if (cur_.kind == Token::End)
        throw ModelError(cur_.pos.line, cur_.pos.column, "unterminated block");
      b.fields.push_back(field());
    }
    expect(Token::RBrace, "'}'");
    return b;
  }

  // field := key value* ';'   with value := atom | m:s | block
  Field field() {
    Field f;
    const Token key = expect(Token::Ident, "field key");
    f.key = key.text;
    f.pos = key.pos;
    while (cur_.kind != Token::Semi) {
      if (cur_.kind == Token::LBrace) {
        f.values.emplace_back(std::make_shared<Block>(block()));
      } else if (cur_.kind == Token::Ident || cur_.kind == Token::Number) {
        Atom a{cur_.text, cur_.pos};
        bump();
        if (cur_.kind == Token::Colon) {  // mask m:s
          bump();
          const Token s = expect(Token::Number, "mask residue");
          a.text += ":" + s.text;
        }
        f.values.push_back(std::move(a));
      } else {
        throw ModelError(cur_.pos.line, cur_.pos.column,
                         "expected a value or ';' in field '" + f.key + "'");
      }
    }
    expect(Token::Semi, "';'");
    return f;
  }
};

// --- interpretation ---

Rat parse_rat(const Atom& a) {
  const auto q = rat_parse(a.text);
  if (!q) throw ModelError(a.pos.line, a.pos.column, "malformed rational '" + a.text + "'");
  return *q;
}

Index parse_index(const Atom& a) {
  try {
    size_t used = 0;
    const long long v = std::stoll(a.text, &used);
    if (used != a.text.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ModelError(a.pos.line, a.pos.column, "malformed integer '" + a.text + "'");
  }
}

ResidueMask parse_mask(const Atom& a) {
  const auto colon = a.text.find(':');
  if (colon == std::string::npos)
    throw ModelError(a.pos.line, a.pos.column, "mask must be modulus:residue");
  try {
    const Index m = std::stoll(a.text.substr(0, colon));
    const Index s = std::stoll(a.text.substr(colon + 1));
    return ResidueMask(m, s);
  } catch (const std::exception& e) {
    throw ModelError(a.pos.line, a.pos.column, std::string("malformed mask: ") + e.what());
  }
}

Space parse_space(const Atom& a) {
  for (const Space s : {Space::Real, Space::C00, Space::C0, Space::C, Space::LInf, Space::C01,
                        Space::L1, Space::CSumL1})
    if (space_name(s) == a.text) return s;
  throw ModelError(a.pos.line, a.pos.column, "unknown space '" + a.text + "'");
}

TailTerm parse_term(const Block& b) {
  b.allow_only({"coeff", "ratio", "mask"});
  const Rat coeff = parse_rat(b.need("coeff").atom(0));
  const Rat ratio = parse_rat(b.need("ratio").atom(0));
  const ResidueMask mask = parse_mask(b.need("mask").atom(0));
  if (ratio < 0 || ratio > 1)
    throw ModelError(b.pos.line, b.pos.column, "ratio outside [0,1]");
  return TailTerm(coeff, ratio, mask);
}

struct Builder {
  ModelTable table;

  SeqElement seq_element(const Block& b) const {
    b.allow_only({"space", "override", "tail", "start"});
    std::map<Index, Rat> overrides;
    TailList tail;
    for (const auto& f : b.fields) {
      if (f.key == "override") {
        const Index j = parse_index(f.atom(0));
        if (j < 1) throw ModelError(f.pos.line, f.pos.column, "override index must be >= 1");
        overrides[j] = parse_rat(f.atom(1));
      } else if (f.key == "tail") {
        tail.push_back(parse_term(f.block(0)));
      }
    }
    Index start = 1;
    for (const auto& [j, v] : overrides) start = std::max(start, j + 1);
    if (const Field* f = b.find("start")) start = std::max(start, parse_index(f->atom(0)));
    try {
      return SeqElement(start, std::move(overrides), std::move(tail));
    } catch (const std::exception& e) {
      throw ModelError(b.pos.line, b.pos.column, e.what());
    }
  }

  PLFunction pl_function(const Block& b) const {
    b.allow_only({"breaks", "piece", "values"});
    std::vector<Rat> breaks;
    for (size_t i = 0; i < b.need("breaks").values.size(); ++i)
      breaks.push_back(parse_rat(b.need("breaks").atom(i)));
    std::vector<PLFunction::Piece> pieces;
    for (const auto& f : b.fields)
      if (f.key == "piece") pieces.push_back({parse_rat(f.atom(0)), parse_rat(f.atom(1))});
    std::vector<Rat> values;
    if (const Field* f = b.find("values")) {
      for (size_t i = 0; i < f->values.size(); ++i) values.push_back(parse_rat(f->atom(i)));
    } else {
      // default point values from the right (left at 1): continuous-from-data
      for (size_t i = 0; i < breaks.size(); ++i)
        values.push_back(i < pieces.size() ? pieces[i].at(breaks[i])
                                           : (pieces.empty() ? Rat(0) : pieces.back().at(breaks[i])));
    }
    try {
      return PLFunction(std::move(breaks), std::move(pieces), std::move(values));
    } catch (const std::exception& e) {
      throw ModelError(b.pos.line, b.pos.column, e.what());
    }
  }

  Element element_slot(const Field& f, size_t i, Space hint) const {
    if (f.is_block(i)) {
      const Block& b = f.block(i);
      if (hint == Space::C01 || hint == Space::L1) return pl_function(b);
      if (hint == Space::CSumL1) {
        b.allow_only({"cpart", "lpart"});
        return DirectSumElement{pl_slot(b.need("cpart"), 0), pl_slot(b.need("lpart"), 0)};
      }
      if (hint == Space::Real) {
        throw ModelError(b.pos.line, b.pos.column, "scalar elements take a plain rational");
      }
      return seq_element(b);
    }
    const Atom& a = f.atom(i);
    if (hint == Space::Real) return parse_rat(a);
    const auto it = table.elements.find(a.text);
    if (it == table.elements.end()) {
      // allow literal rationals for scalars
      if (const auto q = rat_parse(a.text)) return *q;
      throw ModelError(a.pos.line, a.pos.column, "unknown element '" + a.text + "'");
    }
    return it->second;
  }

  PLFunction pl_slot(const Field& f, size_t i) const {
    if (f.is_block(i)) return pl_function(f.block(i));
    const Atom& a = f.atom(i);
    const auto it = table.elements.find(a.text);
    if (it == table.elements.end() || !std::holds_alternative<PLFunction>(it->second))
      throw ModelError(a.pos.line, a.pos.column, "unknown pl function '" + a.text + "'");
    return std::get<PLFunction>(it->second);
  }

  SeqElement seq_slot(const Field& f, size_t i) const {
    if (f.is_block(i)) return seq_element(f.block(i));
    const Atom& a = f.atom(i);
    const auto it = table.elements.find(a.text);
    if (it == table.elements.end() || !std::holds_alternative<SeqElement>(it->second))
      throw ModelError(a.pos.line, a.pos.column, "unknown sequence element '" + a.text + "'");
    return std::get<SeqElement>(it->second);
  }

  ElementSequence sequence_slot(const Field& f, size_t i) const {
    if (f.is_block(i)) return sequence(f.block(i));
    const Atom& a = f.atom(i);
    const auto it = table.sequences.find(a.text);
    if (it == table.sequences.end())
      throw ModelError(a.pos.line, a.pos.column, "unknown sequence '" + a.text + "'");
    return it->second;
  }

  OpPtr op_slot(const Field& f, size_t i) const {
    if (f.is_block(i)) return op(f.block(i), "inline");
    const Atom& a = f.atom(i);
    const auto it = table.operators.find(a.text);
    if (it == table.operators.end())
      throw ModelError(a.pos.line, a.pos.column, "unknown operator '" + a.text + "'");
    return it->second;
  }

  ElementSequence sequence(const Block& b) const {
    static const std::vector<std::string> kGenerators = {
        "constant",    "prefix_sum", "scaled_basis_sum", "tail_truncation", "phi_family",
        "ramp_family", "affine",     "pattern_scaled",   "image",           "sup",
        "abs"};
    b.allow_only({"space", "constant", "prefix_sum", "scaled_basis_sum", "tail_truncation",
                  "phi_family", "ramp_family", "affine", "pattern_scaled", "image", "sup", "abs"});
    const Field* gen = nullptr;
    for (const auto& f : b.fields)
      for (const auto& k : kGenerators)
        if (f.key == k) {
          if (gen)
            throw ModelError(f.pos.line, f.pos.column, "multiple generators in one sequence");
          gen = &f;
        }
    if (!gen) throw ModelError(b.pos.line, b.pos.column, "sequence needs a generator");

    std::optional<Space> space;
    if (const Field* f = b.find("space")) space = parse_space(f->atom(0));

    try {
      if (gen->key == "constant") {
        if (!space) throw ModelError(gen->pos.line, gen->pos.column, "constant needs a space");
        return ElementSequence::constant(*space, element_slot(*gen, 0, *space));
      }
      if (gen->key == "prefix_sum") {
        if (!space) throw ModelError(gen->pos.line, gen->pos.column, "prefix_sum needs a space");
        return ElementSequence::prefix_sum(*space, parse_term(gen->block(0)));
      }
      if (gen->key == "scaled_basis_sum") {
        if (!space) throw ModelError(gen->pos.line, gen->pos.column, "scaled_basis_sum needs a space");
        const Block& p = gen->block(0);
        p.allow_only({"coeff", "ratio", "stride", "offset"});
        return ElementSequence::scaled_basis_sum(*space, parse_rat(p.need("coeff").atom(0)),
                                                 parse_rat(p.need("ratio").atom(0)),
                                                 parse_index(p.need("stride").atom(0)),
                                                 parse_index(p.need("offset").atom(0)));
      }
      if (gen->key == "tail_truncation") {
        if (!space) throw ModelError(gen->pos.line, gen->pos.column, "tail_truncation needs a space");
        const Block& p = gen->block(0);
        p.allow_only({"base", "stride", "offset"});
        return ElementSequence::tail_truncation(*space, seq_slot(p.need("base"), 0),
                                                parse_index(p.need("stride").atom(0)),
                                                parse_index(p.need("offset").atom(0)));
      }
      if (gen->key == "phi_family") {
        const bool direct = !gen->values.empty() && gen->atom(0).text == "direct_sum";
        return direct ? ElementSequence::phi_family_direct_sum() : ElementSequence::phi_family();
      }
      if (gen->key == "ramp_family") {
        if (!space) throw ModelError(gen->pos.line, gen->pos.column, "ramp_family needs a space");
        const Block& p = gen->block(0);
        p.allow_only({"level", "hi", "width", "width_ratio", "direct_sum"});
        GenRampFamily params;
        params.level = parse_rat(p.need("level").atom(0));
        params.hi = parse_rat(p.need("hi").atom(0));
        params.width0 = parse_rat(p.need("width").atom(0));
        params.width_ratio = parse_rat(p.need("width_ratio").atom(0));
        params.as_direct_sum = p.find("direct_sum") != nullptr;
        return ElementSequence::ramp_family(*space, params);
      }
      if (gen->key == "affine") {
        const Block& p = gen->block(0);
        p.allow_only({"alpha", "a", "beta", "b"});
        return ElementSequence::affine_combo(
            parse_rat(p.need("alpha").atom(0)), sequence_slot(p.need("a"), 0),
            parse_rat(p.need("beta").atom(0)), sequence_slot(p.need("b"), 0));
      }
      if (gen->key == "pattern_scaled") {
        const Block& p = gen->block(0);
        p.allow_only({"a", "term"});
        TailList pattern;
        for (const auto& f : p.fields)
          if (f.key == "term") pattern.push_back(parse_term(f.block(0)));
        return ElementSequence::pattern_scaled(ScalarPattern::from_tail(std::move(pattern)),
                                               sequence_slot(p.need("a"), 0));
      }
      if (gen->key == "image") {
        const Block& p = gen->block(0);
        p.allow_only({"op", "of"});
        return ElementSequence::image(op_slot(p.need("op"), 0), sequence_slot(p.need("of"), 0));
      }
      if (gen->key == "sup") {
        const Block& p = gen->block(0);
        p.allow_only({"a", "b"});
        return ElementSequence::sup_of(sequence_slot(p.need("a"), 0),
                                       sequence_slot(p.need("b"), 0));
      }
      // abs
      const Block& p = gen->block(0);
      p.allow_only({"a"});
      return ElementSequence::abs_of(sequence_slot(p.need("a"), 0));
    } catch (const ModelError&) {
      throw;
    } catch (const std::exception& e) {
      throw ModelError(gen->pos.line, gen->pos.column, e.what());
    }
  }

  DualFunctionalC functional(const Block& b) const {
    b.allow_only({"weights", "lim"});
    SeqElement weights = seq_slot(b.need("weights"), 0);
    Rat lim(0);
    if (const Field* f = b.find("lim")) lim = parse_rat(f->atom(0));
    try {
      return DualFunctionalC(std::move(weights), std::move(lim));
    } catch (const std::exception& e) {
      throw ModelError(b.pos.line, b.pos.column, e.what());
    }
  }

  OpPtr op(const Block& b, const std::string& name) const {
    b.allow_only({"domain", "codomain", "diagonal", "finite_rank", "embed_zero_phi", "identity",
                  "eval", "scaled", "sum", "compact"});
    const bool compact = b.find("compact") != nullptr;
    try {
      if (const Field* f = b.find("diagonal")) {
        const Block& p = f->block(0);
        p.allow_only({"coeffs"});
        return make_diagonal(parse_space(b.need("domain").atom(0)),
                             parse_space(b.need("codomain").atom(0)),
                             seq_slot(p.need("coeffs"), 0), name, compact);
      }
      if (const Field* f = b.find("finite_rank")) {
        const Block& p = f->block(0);
        p.allow_only({"rank"});
        const Space dom = parse_space(b.need("domain").atom(0));
        const Space cod = parse_space(b.need("codomain").atom(0));
        std::vector<std::pair<DualFunctionalC, Element>> ranks;
        for (const auto& rf : p.fields) {
          const Block& rb = rf.block(0);
          rb.allow_only({"f", "y"});
          DualFunctionalC fn = [&] {
            const Field& ff = rb.need("f");
            if (ff.is_block(0)) return functional(ff.block(0));
            const auto it = table.functionals.find(ff.atom(0).text);
            if (it == table.functionals.end())
              throw ModelError(ff.pos.line, ff.pos.column,
                               "unknown functional '" + ff.atom(0).text + "'");
            return it->second;
          }();
          ranks.emplace_back(std::move(fn), element_slot(rb.need("y"), 0, cod));
        }
        return make_finite_rank(dom, cod, std::move(ranks), name);
      }
      if (b.find("embed_zero_phi")) return make_embed_zero_phi(name);
      if (b.find("identity")) return make_identity(parse_space(b.need("domain").atom(0)), name);
      if (const Field* f = b.find("eval")) {
        const Block& p = f->block(0);
        p.allow_only({"k"});
        return make_eval_functional(parse_space(b.need("domain").atom(0)),
                                    parse_index(p.need("k").atom(0)), name);
      }
      if (const Field* f = b.find("scaled")) {
        const Block& p = f->block(0);
        p.allow_only({"alpha", "of"});
        return make_scaled(parse_rat(p.need("alpha").atom(0)), op_slot(p.need("of"), 0), name);
      }
      if (const Field* f = b.find("sum")) {
        const Block& p = f->block(0);
        p.allow_only({"a", "b"});
        return make_sum(op_slot(p.need("a"), 0), op_slot(p.need("b"), 0), name);
      }
    } catch (const ModelError&) {
      throw;
    } catch (const std::exception& e) {
      throw ModelError(b.pos.line, b.pos.column, e.what());
    }
    throw ModelError(b.pos.line, b.pos.column, "operator needs a kind");
  }

  OperatorSet opset(const Block& b, const std::string& name) const {
    b.allow_only({"domain", "codomain", "members", "coordinate_evals"});
    OperatorSet set;
    set.name = name;
    set.domain = parse_space(b.need("domain").atom(0));
    set.codomain = parse_space(b.need("codomain").atom(0));
    set.coordinate_evals = b.find("coordinate_evals") != nullptr;
    if (const Field* f = b.find("members"))
      for (size_t i = 0; i < f->values.size(); ++i) set.members.push_back(op_slot(*f, i));
    if (set.members.empty() && !set.coordinate_evals)
      throw ModelError(b.pos.line, b.pos.column, "operator set needs members or coordinate_evals");
    return set;
  }

  SequenceFamily family(const Block& b) const {
    b.allow_only({"members", "limits", "delta", "scaled_base", "coordinate_images", "space"});
    if (b.find("delta")) return DeltaFamily{};
    if (const Field* f = b.find("scaled_base"))
      return ScalarScaledFamily{std::make_shared<const ElementSequence>(sequence_slot(*f, 0))};
    if (const Field* f = b.find("coordinate_images"))
      return CoordinateImagesFamily{std::make_shared<const ElementSequence>(sequence_slot(*f, 0))};
    const Field& members = b.need("members");
    const Field& limits = b.need("limits");
    if (members.values.size() != limits.values.size())
      throw ModelError(limits.pos.line, limits.pos.column, "limits must match members one-to-one");
    FiniteFamily fam;
    for (size_t i = 0; i < members.values.size(); ++i) {
      fam.members.push_back(sequence_slot(members, i));
      fam.limits.push_back(element_slot(limits, i, fam.members.back().space()));
    }
    return fam;
  }

  TestCatalog catalog(const Block& b) const {
    b.allow_only({"space", "default", "entry"});
    const Space space = parse_space(b.need("space").atom(0));
    TestCatalog cat{space, {}, false};
    if (b.find("default")) cat = catalog_default(space);
    for (const auto& f : b.fields) {
      if (f.key != "entry") continue;
      cat.default_entries = false;
      const Block& p = f.block(0);
      p.allow_only({"seq", "bound", "name"});
      CatalogEntry entry{p.find("name") ? p.need("name").atom(0).text
                                        : "entry-" + std::to_string(cat.entries.size()),
                         sequence_slot(p.need("seq"), 0), parse_rat(p.need("bound").atom(0))};
      const auto chk = check_increasing_bounded(entry.seq, entry.bound, 32);
      if (!chk.increasing || !chk.bounded)
        throw ModelError(f.pos.line, f.pos.column, "catalog entry rejected: " + chk.detail);
      cat.entries.push_back(std::move(entry));
    }
    return cat;
  }
};

}  // namespace

const Element& ModelTable::element(const std::string& name) const {
  const auto it = elements.find(name);
  if (it == elements.end()) throw std::out_of_range("unknown element '" + name + "'");
  return it->second;
}
const ElementSequence& ModelTable::sequence(const std::string& name) const {
  const auto it = sequences.find(name);
  if (it == sequences.end()) throw std::out_of_range("unknown sequence '" + name + "'");
  return it->second;
}
const OpPtr& ModelTable::op(const std::string& name) const {
  const auto it = operators.find(name);
  if (it == operators.end()) throw std::out_of_range("unknown operator '" + name + "'");
  return it->second;
}
const OperatorSet& ModelTable::opset(const std::string& name) const {
  const auto it = opsets.find(name);
  if (it == opsets.end()) throw std::out_of_range("unknown operator set '" + name + "'");
  return it->second;
}
const SequenceFamily& ModelTable::family(const std::string& name) const {
  const auto it = families.find(name);
  if (it == families.end()) throw std::out_of_range("unknown family '" + name + "'");
  return it->second;
}
const TestCatalog& ModelTable::catalog(const std::string& name) const {
  const auto it = catalogs.find(name);
  if (it == catalogs.end()) throw std::out_of_range("unknown catalog '" + name + "'");
  return it->second;
}

ModelTable parse_model(const std::string& text) {
  Parser parser(text);
  Builder builder;
  for (const auto& [kind, name, block] : parser.records()) {
    const auto taken = [&](bool exists) {
      if (exists)
        throw ModelError(block.pos.line, block.pos.column, "duplicate name '" + name + "'");
    };
    if (kind == "element") {
      taken(builder.table.elements.count(name) > 0);
      if (const Field* f = block.find("space"); f && parse_space(f->atom(0)) == Space::Real) {
        block.allow_only({"space", "value"});
        builder.table.elements.emplace(name, Element(parse_rat(block.need("value").atom(0))));
      } else {
        builder.table.elements.emplace(name, Element(builder.seq_element(block)));
      }
    } else if (kind == "pl") {
      taken(builder.table.elements.count(name) > 0);
      builder.table.elements.emplace(name, Element(builder.pl_function(block)));
    } else if (kind == "pair") {
      taken(builder.table.elements.count(name) > 0);
      block.allow_only({"cpart", "lpart"});
      builder.table.elements.emplace(
          name, Element(DirectSumElement{builder.pl_slot(block.need("cpart"), 0),
                                         builder.pl_slot(block.need("lpart"), 0)}));
    } else if (kind == "sequence" || kind == "witness") {
      taken(builder.table.sequences.count(name) > 0);
      builder.table.sequences.emplace(name, builder.sequence(block));
    } else if (kind == "functional") {
      taken(builder.table.functionals.count(name) > 0);
      builder.table.functionals.emplace(name, builder.functional(block));
    } else if (kind == "operator") {
      taken(builder.table.operators.count(name) > 0);
      builder.table.operators.emplace(name, builder.op(block, name));
    } else if (kind == "opset") {
      taken(builder.table.opsets.count(name) > 0);
      builder.table.opsets.emplace(name, builder.opset(block, name));
    } else if (kind == "family") {
      taken(builder.table.families.count(name) > 0);
      builder.table.families.emplace(name, builder.family(block));
    } else if (kind == "catalog") {
      taken(builder.table.catalogs.count(name) > 0);
      builder.table.catalogs.emplace(name, builder.catalog(block));
    } else {
      throw ModelError(block.pos.line, block.pos.column, "unknown record kind '" + kind + "'");
    }
  }
  return builder.table;
}

// --- canonical serialization ---

namespace {

void write_seq_element(std::ostream& os, const SeqElement& x, int indent) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  os << "{\n";
  for (const auto& [j, v] : x.overrides())
    os << pad << "  override " << j << " " << rat_str(v) << ";\n";
  for (const auto& t : x.tail())
    os << pad << "  tail { coeff " << rat_str(t.coeff) << "; ratio " << rat_str(t.ratio)
       << "; mask " << t.mask.str() << "; };\n";
  os << pad << "  start " << x.start() << ";\n";
  os << pad << "}";
}

void write_pl(std::ostream& os, const PLFunction& f, int indent) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  os << "{\n" << pad << "  breaks";
  for (const auto& b : f.breakpoints()) os << " " << rat_str(b);
  os << ";\n";
  for (const auto& p : f.pieces())
    os << pad << "  piece " << rat_str(p.slope) << " " << rat_str(p.intercept) << ";\n";
  os << pad << "  values";
  for (const auto& v : f.point_values()) os << " " << rat_str(v);
  os << ";\n" << pad << "}";
}

void write_sequence(std::ostream& os, const ElementSequence& s, int indent);

void write_element(std::ostream& os, const Element& e, Space space, int indent) {
  if (const auto* r = std::get_if<Rat>(&e)) {
    os << rat_str(*r);
    return;
  }
  if (const auto* x = std::get_if<SeqElement>(&e)) {
    write_seq_element(os, *x, indent);
    return;
  }
  if (const auto* f = std::get_if<PLFunction>(&e)) {
    write_pl(os, *f, indent);
    return;
  }
  const auto& d = std::get<DirectSumElement>(e);
  const std::string pad(static_cast<size_t>(indent), ' ');
  os << "{\n" << pad << "  cpart ";
  write_pl(os, d.cpart, indent + 2);
  os << ";\n" << pad << "  lpart ";
  write_pl(os, d.lpart, indent + 2);
  os << ";\n" << pad << "}";
  (void)space;
}

void write_op(std::ostream& os, const OperatorDesc& op, int indent);

void write_sequence(std::ostream& os, const ElementSequence& s, int indent) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  os << "{\n" << pad << "  space " << space_name(s.space()) << ";\n";
  const auto& gen = s.gen();
  if (const auto* g = std::get_if<GenConstant>(&gen)) {
    os << pad << "  constant ";
    write_element(os, g->value, s.space(), indent + 2);
    os << ";\n";
  } else if (const auto* g = std::get_if<GenPrefixSum>(&gen)) {
    os << pad << "  prefix_sum { coeff " << rat_str(g->term.coeff) << "; ratio "
       << rat_str(g->term.ratio) << "; mask " << g->term.mask.str() << "; };\n";
  } else if (const auto* g = std::get_if<GenScaledBasisSum>(&gen)) {
    os << pad << "  scaled_basis_sum { coeff " << rat_str(g->coeff) << "; ratio "
       << rat_str(g->ratio_k) << "; stride " << g->stride << "; offset " << g->offset << "; };\n";
  } else if (const auto* g = std::get_if<GenTailTruncation>(&gen)) {
    os << pad << "  tail_truncation { base ";
    write_seq_element(os, g->base, indent + 2);
    os << "; stride " << g->cut_stride << "; offset " << g->cut_offset << "; };\n";
  } else if (const auto* g = std::get_if<GenRampFamily>(&gen)) {
    if (g->level == 1 && g->hi == Rat(1, 2) && g->width0 == 1 && g->width_ratio == Rat(1, 2)) {
      os << pad << "  phi_family" << (g->as_direct_sum ? " direct_sum" : "") << ";\n";
    } else {
      os << pad << "  ramp_family { level " << rat_str(g->level) << "; hi " << rat_str(g->hi)
         << "; width " << rat_str(g->width0) << "; width_ratio " << rat_str(g->width_ratio) << ";"
         << (g->as_direct_sum ? " direct_sum;" : "") << " };\n";
    }
  } else if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    const auto alpha = g->alpha.tail().empty() ? Rat(0) : g->alpha.tail()[0].coeff;
    if (g->b) {
      const auto beta = g->beta.tail().empty() ? Rat(0) : g->beta.tail()[0].coeff;
      os << pad << "  affine { alpha " << rat_str(alpha) << "; a ";
      write_sequence(os, *g->a, indent + 2);
      os << "; beta " << rat_str(beta) << "; b ";
      write_sequence(os, *g->b, indent + 2);
      os << "; };\n";
    } else {
      os << pad << "  pattern_scaled { a ";
      write_sequence(os, *g->a, indent + 2);
      os << ";";
      for (const auto& t : g->alpha.tail())
        os << " term { coeff " << rat_str(t.coeff) << "; ratio " << rat_str(t.ratio) << "; mask "
           << t.mask.str() << "; };";
      os << " };\n";
    }
  } else if (const auto* g = std::get_if<GenOperatorImage>(&gen)) {
    os << pad << "  image { op ";
    write_op(os, *g->op, indent + 2);
    os << "; of ";
    write_sequence(os, *g->a, indent + 2);
    os << "; };\n";
  } else if (const auto* g = std::get_if<GenSup>(&gen)) {
    os << pad << "  sup { a ";
    write_sequence(os, *g->a, indent + 2);
    os << "; b ";
    write_sequence(os, *g->b, indent + 2);
    os << "; };\n";
  } else if (const auto* g = std::get_if<GenAbs>(&gen)) {
    os << pad << "  abs { a ";
    write_sequence(os, *g->a, indent + 2);
    os << "; };\n";
  } else {
    throw std::invalid_argument("sequence generator is not model-expressible");
  }
  os << pad << "}";
}

void write_functional(std::ostream& os, const DualFunctionalC& f, int indent) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  os << "{\n" << pad << "  weights ";
  write_seq_element(os, f.weights, indent + 2);
  os << ";\n" << pad << "  lim " << rat_str(f.lim_coeff) << ";\n" << pad << "}";
}

void write_op(std::ostream& os, const OperatorDesc& op, int indent) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  os << "{\n";
  os << pad << "  domain " << space_name(op.domain) << ";\n";
  os << pad << "  codomain " << space_name(op.codomain) << ";\n";
  if (const auto* d = std::get_if<OpDiagonal>(&op.kind)) {
    os << pad << "  diagonal { coeffs ";
    write_seq_element(os, d->coeffs, indent + 2);
    os << "; };\n";
  } else if (const auto* fr = std::get_if<OpFiniteRank>(&op.kind)) {
    os << pad << "  finite_rank {";
    for (const auto& [f, y] : fr->ranks) {
      os << " rank { f ";
      write_functional(os, f, indent + 2);
      os << "; y ";
      write_element(os, y, op.codomain, indent + 2);
      os << "; };";
    }
    os << " };\n";
  } else if (std::holds_alternative<OpEmbedZeroPhi>(op.kind)) {
    os << pad << "  embed_zero_phi;\n";
  } else if (std::holds_alternative<OpIdentity>(op.kind)) {
    os << pad << "  identity;\n";
  } else if (const auto* ev = std::get_if<OpEvalFunctional>(&op.kind)) {
    os << pad << "  eval { k " << ev->k << "; };\n";
  } else if (const auto* sc = std::get_if<OpScaled>(&op.kind)) {
    os << pad << "  scaled { alpha " << rat_str(sc->alpha) << "; of ";
    write_op(os, *sc->inner, indent + 2);
    os << "; };\n";
  } else {
    const auto& sum = std::get<OpSum>(op.kind);
    os << pad << "  sum { a ";
    write_op(os, *sum.lhs, indent + 2);
    os << "; b ";
    write_op(os, *sum.rhs, indent + 2);
    os << "; };\n";
  }
  if (op.compact_assumed) os << pad << "  compact;\n";
  os << pad << "}";
}

}  // namespace

std::string serialize_model(const ModelTable& table) {
  std::ostringstream os;
  for (const auto& [name, e] : table.elements) {
    if (const auto* r = std::get_if<Rat>(&e)) {
      os << "element " << name << " {\n  space real;\n  value " << rat_str(*r) << ";\n}\n";
    } else if (std::holds_alternative<SeqElement>(e)) {
      os << "element " << name << " ";
      write_seq_element(os, std::get<SeqElement>(e), 0);
      os << "\n";
    } else if (std::holds_alternative<PLFunction>(e)) {
      os << "pl " << name << " ";
      write_pl(os, std::get<PLFunction>(e), 0);
      os << "\n";
    } else {
      const auto& d = std::get<DirectSumElement>(e);
      os << "pair " << name << " {\n  cpart ";
      write_pl(os, d.cpart, 2);
      os << ";\n  lpart ";
      write_pl(os, d.lpart, 2);
      os << ";\n}\n";
    }
  }
  for (const auto& [name, f] : table.functionals) {
    os << "functional " << name << " ";
    write_functional(os, f, 0);
    os << "\n";
  }
  for (const auto& [name, s] : table.sequences) {
    os << "sequence " << name << " ";
    write_sequence(os, s, 0);
    os << "\n";
  }
  for (const auto& [name, op] : table.operators) {
    os << "operator " << name << " ";
    write_op(os, *op, 0);
    os << "\n";
  }
  for (const auto& [name, set] : table.opsets) {
    os << "opset " << name << " {\n  domain " << space_name(set.domain) << ";\n  codomain "
       << space_name(set.codomain) << ";\n";
    if (set.coordinate_evals) os << "  coordinate_evals;\n";
    if (!set.members.empty()) {
      os << "  members";
      for (const auto& m : set.members) {
        os << " ";
        write_op(os, *m, 2);
      }
      os << ";\n";
    }
    os << "}\n";
  }
  for (const auto& [name, fam] : table.families) {
    os << "family " << name << " {\n";
    if (std::holds_alternative<DeltaFamily>(fam)) {
      os << "  delta;\n";
    } else if (const auto* sc = std::get_if<ScalarScaledFamily>(&fam)) {
      os << "  scaled_base ";
      write_sequence(os, *sc->base, 2);
      os << ";\n";
    } else if (const auto* ci = std::get_if<CoordinateImagesFamily>(&fam)) {
      os << "  coordinate_images ";
      write_sequence(os, *ci->base, 2);
      os << ";\n";
    } else {
      const auto& ff = std::get<FiniteFamily>(fam);
      os << "  members";
      for (const auto& m : ff.members) {
        os << " ";
        write_sequence(os, m, 2);
      }
      os << ";\n  limits";
      for (size_t i = 0; i < ff.limits.size(); ++i) {
        os << " ";
        write_element(os, ff.limits[i], ff.members[i].space(), 2);
      }
      os << ";\n";
    }
    os << "}\n";
  }
  for (const auto& [name, cat] : table.catalogs) {
    os << "catalog " << name << " {\n  space " << space_name(cat.space) << ";\n";
    if (cat.default_entries) {
      os << "  default;\n";
    } else {
      for (const auto& entry : cat.entries) {
        os << "  entry { name " << entry.name << "; seq ";
        write_sequence(os, entry.seq, 2);
        os << "; bound " << rat_str(entry.bound) << "; };\n";
      }
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace levilab
