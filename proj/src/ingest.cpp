#include "grafcet/ingest.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace grafcet {

using nlohmann::json;

IngestError::IngestError(Kind kind, std::string message, std::string path, std::size_t line, std::size_t column,
                         std::vector<Finding> findings)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      path_(std::move(path)),
      line_(line),
      column_(column),
      findings_(std::move(findings))
{
}

std::string_view to_string(IngestError::Kind k)
{
    switch (k) {
    case IngestError::Kind::Syntax: return "syntax error";
    case IngestError::Kind::Schema: return "schema error";
    case IngestError::Kind::Semantic: return "semantic error";
    }
    return "error";
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg)
{
    throw IngestError(IngestError::Kind::Schema, path + ": " + msg, path);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object())
        schema_error(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            schema_error(path, "unknown field '" + key + "'");
    }
}

const json& required(const json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        schema_error(path, std::string("missing field '") + key + "'");
    return *it;
}

std::string get_string(const json& obj, const std::string& path, const char* key)
{
    const json& v = required(obj, path, key);
    if (!v.is_string())
        schema_error(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::optional<std::string> opt_string(const json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        return std::nullopt;
    if (!it->is_string())
        schema_error(path + "/" + key, "expected a string");
    return it->get<std::string>();
}

bool opt_bool(const json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        return false;
    if (!it->is_boolean())
        schema_error(path + "/" + key, "expected a Boolean");
    return it->get<bool>();
}

const json& array_field(const json& obj, const std::string& path, const char* key, bool optional)
{
    static const json empty = json::array();
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (optional)
            return empty;
        schema_error(path, std::string("missing field '") + key + "'");
    }
    if (!it->is_array())
        schema_error(path + "/" + key, "expected an array");
    return *it;
}

std::vector<std::string> string_list(const json& arr, const std::string& path)
{
    if (!arr.is_array())
        schema_error(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string())
            schema_error(path + "/" + std::to_string(i), "expected a string");
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

std::int64_t literal_value(const json& v, const std::string& path)
{
    if (v.is_boolean())
        return v.get<bool>() ? 1 : 0;
    if (v.is_number_integer())
        return v.get<std::int64_t>();
    schema_error(path, "expected a Boolean or integer");
}

SafetyQuery parse_query(const json& q, const std::string& path)
{
    only_keys(q, path, {"name", "kind", "a", "b"});
    SafetyQuery out;
    out.name = get_string(q, path, "name");
    std::string kind = get_string(q, path, "kind");
    if (kind == "never-concurrent") {
        out.kind = SafetyQuery::Kind::NeverConcurrent;
        out.step_a = get_string(q, path, "a");
        out.step_b = get_string(q, path, "b");
    } else if (kind == "never-coactive") {
        out.kind = SafetyQuery::Kind::NeverCoactive;
        auto lit = [&](const char* key) {
            std::string p = path + "/" + key;
            const json& l = required(q, path, key);
            only_keys(l, p, {"var", "value"});
            SafetyQuery::Literal r;
            r.var = get_string(l, p, "var");
            r.value = literal_value(required(l, p, "value"), p + "/value");
            return r;
        };
        out.lit_a = lit("a");
        out.lit_b = lit("b");
    } else {
        schema_error(path + "/kind", "unknown query kind '" + kind + "'");
    }
    return out;
}

std::vector<SafetyQuery> parse_query_array(const json& arr, const std::string& path)
{
    std::vector<SafetyQuery> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(parse_query(arr[i], path + "/" + std::to_string(i)));
    return out;
}

// Expression text awaiting resolution once every step is known.
struct PendingExpr {
    Expr* target;
    std::string text;
    std::string partial;
    std::string path;
    std::optional<VarType> value_of;  // set for stored-action values; resolved against the target variable
    std::string value_var;
};

json parse_document(std::string_view document)
{
    try {
        return json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < byte && i < document.size(); ++i) {
            if (document[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        throw IngestError(IngestError::Kind::Syntax, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg,
                          {}, line, col);
    }
}

}  // namespace

GrafcetSpec parse_spec(std::string_view document)
{
    json doc = parse_document(document);
    only_keys(doc, "", {"name", "variables", "partials", "queries"});

    GrafcetSpec spec;
    spec.name = get_string(doc, "", "name");

    const json& vars = array_field(doc, "", "variables", true);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        std::string path = "/variables/" + std::to_string(i);
        only_keys(vars[i], path, {"name", "kind", "type", "init"});
        VariableDecl v;
        v.name = get_string(vars[i], path, "name");
        std::string kind = get_string(vars[i], path, "kind");
        if (kind == "input")
            v.kind = VarKind::Input;
        else if (kind == "internal")
            v.kind = VarKind::Internal;
        else if (kind == "output")
            v.kind = VarKind::Output;
        else
            schema_error(path + "/kind", "expected input, internal or output");
        std::string type = get_string(vars[i], path, "type");
        if (type == "bool")
            v.type = VarType::Bool;
        else if (type == "int")
            v.type = VarType::Int;
        else
            schema_error(path + "/type", "expected bool or int");
        if (auto it = vars[i].find("init"); it != vars[i].end())
            v.init = literal_value(*it, path + "/init");
        spec.variables.push_back(std::move(v));
    }

    const json& partials = array_field(doc, "", "partials", false);
    if (partials.empty())
        schema_error("/partials", "at least one partial Grafcet is required");

    // Reserve so Expr pointers into the model stay valid.
    spec.partials.reserve(partials.size());
    std::vector<PendingExpr> pending;

    for (std::size_t pi = 0; pi < partials.size(); ++pi) {
        std::string ppath = "/partials/" + std::to_string(pi);
        const json& pj = partials[pi];
        only_keys(pj, ppath, {"id", "steps", "enclosings", "transitions", "actions"});
        PartialGrafcet& p = spec.partials.emplace_back();
        p.id = get_string(pj, ppath, "id");

        const json& steps = array_field(pj, ppath, "steps", false);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            std::string path = ppath + "/steps/" + std::to_string(i);
            only_keys(steps[i], path, {"id", "initial", "marked"});
            Step s;
            s.id = get_string(steps[i], path, "id");
            s.initial = opt_bool(steps[i], path, "initial");
            s.marked = opt_bool(steps[i], path, "marked");
            p.steps.push_back(std::move(s));
        }

        const json& encl = array_field(pj, ppath, "enclosings", true);
        for (std::size_t i = 0; i < encl.size(); ++i) {
            std::string path = ppath + "/enclosings/" + std::to_string(i);
            only_keys(encl[i], path, {"step", "target"});
            p.enclosings.push_back({get_string(encl[i], path, "step"), get_string(encl[i], path, "target")});
        }

        const json& trans = array_field(pj, ppath, "transitions", true);
        p.transitions.reserve(trans.size());
        for (std::size_t i = 0; i < trans.size(); ++i) {
            std::string path = ppath + "/transitions/" + std::to_string(i);
            only_keys(trans[i], path, {"id", "from", "to", "cond"});
            Transition& t = p.transitions.emplace_back();
            t.id = get_string(trans[i], path, "id");
            t.upstream = string_list(required(trans[i], path, "from"), path + "/from");
            t.downstream = string_list(required(trans[i], path, "to"), path + "/to");
            if (auto c = opt_string(trans[i], path, "cond"))
                pending.push_back({&t.condition, *c, p.id, path + "/cond", std::nullopt, {}});
        }

        const json& acts = array_field(pj, ppath, "actions", true);
        p.actions.reserve(acts.size());
        for (std::size_t i = 0; i < acts.size(); ++i) {
            std::string path = ppath + "/actions/" + std::to_string(i);
            const json& aj = acts[i];
            if (!aj.is_object())
                schema_error(path, "expected an object");
            std::string kind = get_string(aj, path, "kind");
            std::string id = opt_string(aj, path, "id").value_or("a" + std::to_string(i));
            if (kind == "continuous") {
                only_keys(aj, path, {"kind", "id", "step", "var", "cond"});
                auto& a = std::get<ContinuousAction>(p.actions.emplace_back(ContinuousAction{}));
                a.id = id;
                a.step = get_string(aj, path, "step");
                a.var = get_string(aj, path, "var");
                if (auto c = opt_string(aj, path, "cond"))
                    pending.push_back({&a.condition, *c, p.id, path + "/cond", std::nullopt, {}});
            } else if (kind == "stored") {
                only_keys(aj, path, {"kind", "id", "step", "var", "value", "trigger", "cond"});
                auto& a = std::get<StoredAction>(p.actions.emplace_back(StoredAction{}));
                a.id = id;
                a.step = get_string(aj, path, "step");
                a.var = get_string(aj, path, "var");
                std::string trig = get_string(aj, path, "trigger");
                if (trig == "activation")
                    a.trigger = Trigger::Activation;
                else if (trig == "deactivation")
                    a.trigger = Trigger::Deactivation;
                else if (trig == "during")
                    a.trigger = Trigger::During;
                else
                    schema_error(path + "/trigger", "expected activation, deactivation or during");
                pending.push_back({&a.value, get_string(aj, path, "value"), p.id, path + "/value", VarType::Int, a.var});
                if (auto c = opt_string(aj, path, "cond"))
                    pending.push_back({&a.condition, *c, p.id, path + "/cond", std::nullopt, {}});
            } else if (kind == "forcing") {
                only_keys(aj, path, {"kind", "id", "step", "target", "situation"});
                auto& a = std::get<ForcingAction>(p.actions.emplace_back(ForcingAction{}));
                a.id = id;
                a.step = get_string(aj, path, "step");
                a.target = get_string(aj, path, "target");
                const json& sit = required(aj, path, "situation");
                if (sit.is_string()) {
                    std::string s = sit.get<std::string>();
                    if (s == "*")
                        a.situation.kind = ForcedSituation::Kind::Current;
                    else if (s == "init")
                        a.situation.kind = ForcedSituation::Kind::Init;
                    else
                        schema_error(path + "/situation", "expected a step list, \"*\" or \"init\"");
                } else {
                    a.situation.kind = ForcedSituation::Kind::Steps;
                    a.situation.steps = string_list(sit, path + "/situation");
                }
            } else {
                schema_error(path + "/kind", "unknown action kind '" + kind + "'");
            }
        }
    }

    if (auto it = doc.find("queries"); it != doc.end()) {
        if (!it->is_array())
            schema_error("/queries", "expected an array");
        spec.queries = parse_query_array(*it, "/queries");
    }

    for (auto& pe : pending) {
        SpecScope scope(spec, pe.partial);
        try {
            if (pe.value_of) {
                const VariableDecl* v = spec.variable(pe.value_var);
                if (!v)
                    throw IngestError(IngestError::Kind::Semantic, pe.path + ": stored action writes undeclared variable '" +
                                                                       pe.value_var + "'",
                                      pe.path);
                *pe.target = parse_value(pe.text, v->type, &scope);
            } else {
                *pe.target = parse_condition(pe.text, &scope);
            }
        } catch (const ParseError& e) {
            throw IngestError(e.kind() == ParseError::Kind::Semantic ? IngestError::Kind::Semantic : IngestError::Kind::Syntax,
                              pe.path + ": in \"" + pe.text + "\" at offset " + std::to_string(e.position()) + ": " + e.what(),
                              pe.path);
        }
    }

    auto findings = validate(spec);
    std::vector<Finding> errors;
    for (const auto& f : findings)
        if (f.severity == Severity::Error)
            errors.push_back(f);
    if (!errors.empty()) {
        std::string msg = errors.front().message;
        if (errors.size() > 1)
            msg += " (and " + std::to_string(errors.size() - 1) + " more)";
        throw IngestError(IngestError::Kind::Semantic, msg, {}, 0, 0, std::move(errors));
    }
    return spec;
}

GrafcetSpec load_spec(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

json spec_to_json(const GrafcetSpec& spec)
{
    json doc;
    doc["name"] = spec.name;
    json vars = json::array();
    for (const auto& v : spec.variables) {
        json j = {{"name", v.name}, {"kind", to_string(v.kind)}, {"type", to_string(v.type)}};
        if (v.init)
            j["init"] = *v.init;
        vars.push_back(std::move(j));
    }
    doc["variables"] = std::move(vars);

    json partials = json::array();
    for (const auto& p : spec.partials) {
        json pj;
        pj["id"] = p.id;
        json steps = json::array();
        for (const auto& s : p.steps) {
            json sj = {{"id", s.id}};
            if (s.initial)
                sj["initial"] = true;
            if (s.marked)
                sj["marked"] = true;
            steps.push_back(std::move(sj));
        }
        pj["steps"] = std::move(steps);
        json encl = json::array();
        for (const auto& e : p.enclosings)
            encl.push_back({{"step", e.step}, {"target", e.target}});
        pj["enclosings"] = std::move(encl);
        json trans = json::array();
        for (const auto& t : p.transitions)
            trans.push_back({{"id", t.id}, {"from", t.upstream}, {"to", t.downstream}, {"cond", to_string(t.condition)}});
        pj["transitions"] = std::move(trans);
        json acts = json::array();
        for (const auto& a : p.actions) {
            json aj;
            if (const auto* c = std::get_if<ContinuousAction>(&a)) {
                aj = {{"kind", "continuous"}, {"id", c->id}, {"step", c->step}, {"var", c->var}};
                if (!c->condition.is_true_literal())
                    aj["cond"] = to_string(c->condition);
            } else if (const auto* s = std::get_if<StoredAction>(&a)) {
                aj = {{"kind", "stored"},
                      {"id", s->id},
                      {"step", s->step},
                      {"var", s->var},
                      {"value", to_string(s->value)},
                      {"trigger", to_string(s->trigger)}};
                if (!s->condition.is_true_literal())
                    aj["cond"] = to_string(s->condition);
            } else {
                const auto& f = std::get<ForcingAction>(a);
                aj = {{"kind", "forcing"}, {"id", f.id}, {"step", f.step}, {"target", f.target}};
                switch (f.situation.kind) {
                case ForcedSituation::Kind::Steps: aj["situation"] = f.situation.steps; break;
                case ForcedSituation::Kind::Current: aj["situation"] = "*"; break;
                case ForcedSituation::Kind::Init: aj["situation"] = "init"; break;
                }
            }
            acts.push_back(std::move(aj));
        }
        pj["actions"] = std::move(acts);
        partials.push_back(std::move(pj));
    }
    doc["partials"] = std::move(partials);

    if (!spec.queries.empty()) {
        json qs = json::array();
        for (const auto& q : spec.queries) {
            if (q.kind == SafetyQuery::Kind::NeverConcurrent) {
                qs.push_back({{"name", q.name}, {"kind", "never-concurrent"}, {"a", q.step_a}, {"b", q.step_b}});
            } else {
                auto lit = [&](const SafetyQuery::Literal& l) {
                    const auto* v = spec.variable(l.var);
                    json value = (v && v->type == VarType::Bool) ? json(l.value != 0) : json(l.value);
                    return json{{"var", l.var}, {"value", value}};
                };
                qs.push_back({{"name", q.name}, {"kind", "never-coactive"}, {"a", lit(q.lit_a)}, {"b", lit(q.lit_b)}});
            }
        }
        doc["queries"] = std::move(qs);
    }
    return doc;
}

std::string serialize_spec(const GrafcetSpec& spec)
{
    return spec_to_json(spec).dump(2) + "\n";
}

std::vector<SafetyQuery> parse_queries(std::string_view document)
{
    json doc = parse_document(document);
    if (doc.is_array())
        return parse_query_array(doc, "");
    only_keys(doc, "", {"queries"});
    return parse_query_array(array_field(doc, "", "queries", false), "/queries");
}

}  // namespace grafcet
