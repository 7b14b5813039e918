// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/scenario.hpp"

#include "mpcevm/fixtures.hpp"
#include "mpcevm/rng.hpp"

#include <toml.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mpcevm
{
namespace
{
// ---- parsing ----

class Reader
{
public:
    explicit Reader(std::string source) : source_{std::move(source)} {}

    [[noreturn]] void fail(const toml::node* at, const std::string& what) const
    {
        std::string where = source_;
        if (at && at->source().begin)
            where += ":" + std::to_string(at->source().begin.line);
        throw ScenarioInvalid{where + ": " + what};
    }

    /// Rejects keys outside `known`, which are almost always typos.
    void only(const toml::table& t, std::initializer_list<std::string_view> known, const std::string& ctx) const
    {
        for (const auto& [k, v] : t)
            if (std::find(known.begin(), known.end(), k.str()) == known.end())
                fail(&v, "unknown field '" + std::string{k.str()} + "' in " + ctx);
    }

    std::uint64_t u64(const toml::table& t, std::string_view key, std::uint64_t def) const
    {
        const toml::node* n = t.get(key);
        if (!n)
            return def;
        auto v = n->value<std::int64_t>();
        if (!v || *v < 0)
            fail(n, "field '" + std::string{key} + "' must be a non-negative integer");
        return static_cast<std::uint64_t>(*v);
    }

    std::string str(const toml::table& t, std::string_view key, std::string def = {}, bool required = false) const
    {
        const toml::node* n = t.get(key);
        if (!n)
        {
            if (required)
                fail(&t, "missing field '" + std::string{key} + "'");
            return def;
        }
        auto v = n->value<std::string>();
        if (!v)
            fail(n, "field '" + std::string{key} + "' must be a string");
        return *v;
    }

    bool flag(const toml::table& t, std::string_view key, bool def) const
    {
        const toml::node* n = t.get(key);
        if (!n)
            return def;
        auto v = n->value<bool>();
        if (!v)
            fail(n, "field '" + std::string{key} + "' must be true or false");
        return *v;
    }

    ArgRef arg(const toml::node& n) const
    {
        if (auto i = n.value<std::int64_t>(); i && *i >= 0 && n.is_integer())
            return static_cast<Word>(*i);
        if (auto s = n.value<std::string>())
            return *s;
        fail(&n, "argument must be a non-negative integer or a reference string");
    }

    std::vector<ArgRef> args(const toml::table& t, std::string_view key) const
    {
        std::vector<ArgRef> out;
        const toml::node* n = t.get(key);
        if (!n)
            return out;
        const toml::array* a = n->as_array();
        if (!a)
            fail(n, "field '" + std::string{key} + "' must be an array");
        for (const auto& e : *a)
            out.push_back(arg(e));
        return out;
    }

    std::vector<std::vector<Word>> matrix(const toml::table& t, std::string_view key) const
    {
        std::vector<std::vector<Word>> out;
        const toml::node* n = t.get(key);
        if (!n)
            return out;
        const toml::array* rows = n->as_array();
        if (!rows)
            fail(n, "field '" + std::string{key} + "' must be an array of arrays");
        for (const auto& row : *rows)
        {
            const toml::array* r = row.as_array();
            if (!r)
                fail(&row, "each entry of '" + std::string{key} + "' must be an array");
            auto& v = out.emplace_back();
            for (const auto& e : *r)
            {
                auto i = e.value<std::int64_t>();
                if (!i || *i < 0)
                    fail(&e, "inputs must be non-negative integers");
                v.push_back(static_cast<Word>(*i));
            }
        }
        return out;
    }

    template <typename F>
    void each(const toml::table& root, std::string_view key, F&& f) const
    {
        const toml::node* n = root.get(key);
        if (!n)
            return;
        const toml::array* a = n->as_array();
        if (!a)
            fail(n, "'" + std::string{key} + "' must be an array of tables");
        for (const auto& e : *a)
        {
            const toml::table* t = e.as_table();
            if (!t)
                fail(&e, "'" + std::string{key} + "' entries must be tables");
            f(*t);
        }
    }

    const toml::table* table(const toml::table& root, std::string_view key) const
    {
        const toml::node* n = root.get(key);
        if (!n)
            return nullptr;
        if (!n->as_table())
            fail(n, "'" + std::string{key} + "' must be a table");
        return n->as_table();
    }

private:
    std::string source_;
};

// ---- running ----

std::string status_name(const Receipt& rc)
{
    if (rc.status == TxStatus::reverted && rc.denied_by_lock)
        return "denied";
    return to_string(rc.status);
}

/// Tie rule of the ten-bidder bracket: the top match pits {4..7} against
/// {8, 9, 0..3}, and every match prefers its left side.
std::pair<Word, Word> max_bid_oracle(const std::vector<Word>& v)
{
    std::vector<std::size_t> order;
    if (v.size() == 10)
        order = {4, 5, 6, 7, 8, 9, 0, 1, 2, 3};
    else
    {
        // plain left-leaning knockout, odd entrant carried up
        std::vector<std::pair<Word, std::size_t>> round;
        for (std::size_t i = 0; i < v.size(); ++i)
            round.emplace_back(v[i], i);
        while (round.size() > 1)
        {
            std::vector<std::pair<Word, std::size_t>> next;
            for (std::size_t i = 0; i + 1 < round.size(); i += 2)
                next.push_back(round[i].first >= round[i + 1].first ? round[i] : round[i + 1]);
            if (round.size() % 2)
                next.push_back(round.back());
            round = std::move(next);
        }
        return {round[0].first, round[0].second};
    }
    Word best = v[order[0]];
    std::size_t who = order[0];
    for (std::size_t i : order)
        if (v[i] > best)
        {
            best = v[i];
            who = i;
        }
    return {best, who};
}

nlohmann::json words(const std::vector<Word>& v)
{
    return nlohmann::json(v);
}

class Runner
{
public:
    Runner(const Scenario& s, const RunOptions& o) : s_{s}, opt_{o}, seed_{o.seed.value_or(s.seed)}, rng_{seed_} {}

    RunOutcome run();

private:
    Address named(const std::string& name) const;
    std::vector<Word> resolve(const std::vector<ArgRef>& args) const;
    void submit_for(std::uint64_t height);
    void after_block(const CommittedBlock& b);
    std::vector<std::vector<Word>> secrets_for(const SessionStart& start);
    std::optional<std::vector<Word>> expected(const SessionSpec& spec, const SessionRecord& rec) const;
    Word deposit_before(Address contract, Address who, std::uint64_t height) const;
    bool idle() const;

    const Scenario& s_;
    RunOptions opt_;
    std::uint64_t seed_;
    Rng rng_;

    std::vector<Address> committee_;
    std::vector<Address> users_;
    std::map<std::string, Address> names_;
    std::map<std::string, Word> cids_;
    std::shared_ptr<CircuitRegistry> reg_ = std::make_shared<CircuitRegistry>();
    std::unique_ptr<Ledger> ledger_;
    std::unique_ptr<Simulator> sim_;
    WorldState genesis_;

    std::vector<std::pair<std::uint64_t, std::string>> creates_;
    std::vector<std::uint64_t> tx_tickets_;
    std::map<std::uint64_t, std::uint64_t> workload_;  // ticket -> submitted at
    std::vector<std::optional<std::uint64_t>> loop_ticket_;
    std::map<std::string, std::size_t> served_;
    std::map<SessionKey, const SessionSpec*> spec_of_;
    std::uint64_t last_scripted_ = 0;
};

Address Runner::named(const std::string& name) const
{
    auto it = names_.find(name);
    if (it == names_.end())
        throw ScenarioInvalid{"reference to '" + name + "' which does not exist (yet)"};
    return it->second;
}

std::vector<Word> Runner::resolve(const std::vector<ArgRef>& args) const
{
    std::vector<Word> out;
    for (const auto& a : args)
    {
        if (const Word* w = std::get_if<Word>(&a))
        {
            out.push_back(*w);
            continue;
        }
        const std::string& ref = std::get<std::string>(a);
        if (ref == "@committee")
            for (Address p : committee_)
                out.push_back(p.value);
        else if (ref.starts_with("@"))
            out.push_back(named(ref.substr(1)).value);
        else if (ref.starts_with("#") && cids_.contains(ref.substr(1)))
            out.push_back(cids_.at(ref.substr(1)));
        else
            throw ScenarioInvalid{"cannot resolve argument '" + ref + "'"};
    }
    return out;
}

void Runner::submit_for(std::uint64_t height)
{
    for (const auto& c : s_.contracts)
        if (c.block == height)
        {
            Transaction t;
            t.kind = TxKind::create;
            t.sender = named(c.deployer);
            t.gas_limit = 1'000'000;
            t.fixture = c.fixture;
            t.args = resolve(c.args);
            t.value = c.value;
            creates_.emplace_back(sim_->submit(std::move(t)), c.name);
        }
    for (std::size_t i = 0; i < s_.txs.size(); ++i)
    {
        const TxSpec& x = s_.txs[i];
        if (x.block != height)
            continue;
        Transaction t;
        t.kind = TxKind::regular;
        t.sender = named(x.from);
        t.gas_limit = 1'000'000;
        t.target = named(x.to);
        t.method = x.method;
        t.args = resolve(x.args);
        t.value = x.value;
        tx_tickets_[i] = sim_->submit(std::move(t));
    }
    const WorkloadSpec& w = s_.workload;
    if (w.per_block && height >= w.from_block && height <= w.to_block)
        for (std::uint64_t k = 0; k < w.per_block; ++k)
        {
            const std::size_t from = rng_.uniform_below(users_.size());
            std::size_t to = rng_.uniform_below(users_.size() - 1);
            to += to >= from;
            Transaction t;
            t.kind = TxKind::regular;
            t.sender = users_[from];
            t.gas_limit = 1000;
            t.target = users_[to];
            t.value = 1 + rng_.uniform_below(w.max_amount);
            workload_[sim_->submit(std::move(t))] = height;
        }
    for (std::size_t i = 0; i < s_.loops.size(); ++i)
    {
        const LoopSpec& l = s_.loops[i];
        if (height < l.from_block || height > l.to_block)
            continue;
        auto& pending = loop_ticket_[i];
        if (pending && !sim_->receipt(*pending))
            continue;
        const Address target = named(l.to);
        if (ledger_->locks().contains(target))
            continue;
        Transaction t;
        t.kind = TxKind::regular;
        t.sender = named(l.from);
        t.gas_limit = 1'000'000;
        t.target = target;
        t.method = l.method;
        t.args = resolve(l.args);
        pending = sim_->submit(std::move(t));
    }
}

void Runner::after_block(const CommittedBlock& b)
{
    for (const auto& [ticket, name] : creates_)
        if (!names_.contains(name))
            if (const auto* r = sim_->receipt(ticket); r && r->second.status == TxStatus::success)
                names_[name] = r->second.created;
    submit_for(b.height + 1);
}

std::vector<std::vector<Word>> Runner::secrets_for(const SessionStart& start)
{
    for (const auto& [name, addr] : names_)
    {
        if (addr != start.contract)
            continue;
        std::vector<const SessionSpec*> specs;
        for (const auto& spec : s_.sessions)
            if (spec.contract == name)
                specs.push_back(&spec);
        if (specs.empty())
            return {};
        std::size_t& k = served_[name];
        const SessionSpec* spec = k < specs.size() ? specs[k] : specs.back()->repeat ? specs.back() : nullptr;
        ++k;
        if (!spec)
            return {};
        spec_of_[start.key] = spec;
        return spec->inputs;
    }
    return {};
}

Word Runner::deposit_before(Address contract, Address who, std::uint64_t height) const
{
    Word sum = 0;
    for (std::size_t i = 0; i < s_.txs.size(); ++i)
    {
        const TxSpec& x = s_.txs[i];
        if (x.method != "deposit" || !names_.contains(x.to) || names_.at(x.to) != contract || named(x.from) != who)
            continue;
        const auto* r = sim_->receipt(tx_tickets_[i]);
        if (r && r->first < height && r->second.status == TxStatus::success)
            sum += x.value;
    }
    return sum;
}

std::optional<std::vector<Word>> Runner::expected(const SessionSpec& spec, const SessionRecord& rec) const
{
    const Circuit& c = reg_->get(rec.cid);
    if (spec.oracle == "weighted_vote")
    {
        Word tally[2] = {0, 0};
        for (std::size_t i = 0; i < spec.inputs.size(); ++i)
        {
            const Word dep = deposit_before(rec.contract, committee_[i], rec.started);
            const Word weight = dep >= spec.min_deposit ? dep : 0;
            tally[0] += weight * spec.inputs[i][0];
            tally[1] += weight * spec.inputs[i][1];
        }
        // ties go to the first proposal
        return std::vector<Word>{tally[1] > tally[0] ? 1u : 0u, 0, 0};
    }
    if (spec.oracle == "max_bid")
    {
        std::vector<Word> counted;
        for (std::size_t i = 0; i < spec.inputs.size(); ++i)
        {
            const Word dep = deposit_before(rec.contract, committee_[i], rec.started);
            counted.push_back(dep >= spec.min_deposit ? spec.inputs[i][0] : 0);
        }
        const auto [bid, who] = max_bid_oracle(counted);
        return std::vector<Word>{bid, who, 0, 0};
    }
    if (spec.oracle == "sum")
    {
        Word sum = 0;
        for (const auto& row : spec.inputs)
            for (Word v : row)
                sum += v;
        return std::vector<Word>{sum, 0, 0};
    }
    if (spec.oracle == "products")
    {
        std::vector<Word> flat, out;
        for (const auto& row : spec.inputs)
            flat.insert(flat.end(), row.begin(), row.end());
        for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
            out.push_back(flat[i] * flat[i + 1]);
        out.push_back(0);
        out.push_back(0);
        return out;
    }
    if (spec.oracle == "cheater")
    {
        std::vector<Word> out(c.output_count, 0);
        out.push_back(1);
        out.push_back(s_.faults.empty() ? 0 : s_.faults.front().party);
        return out;
    }
    return std::nullopt;
}

bool Runner::idle() const
{
    return ledger_->height() >= last_scripted_ && sim_->live_sessions() == 0 && ledger_->locks().empty() &&
           sim_->mempool_size() == 0;
}

RunOutcome Runner::run()
{
    for (std::uint32_t i = 0; i < s_.n; ++i)
    {
        committee_.push_back(address_from_label("party" + std::to_string(i)));
        names_["party" + std::to_string(i)] = committee_.back();
    }
    for (const auto& a : s_.accounts)
        names_[a.name] = address_from_label(a.name);
    for (std::uint32_t i = 0; s_.workload.per_block && i < s_.workload.users; ++i)
        users_.push_back(address_from_label("user" + std::to_string(i)));
    for (const auto& c : s_.circuits)
        cids_[c.name] = reg_->register_circuit(build_named_circuit(c.builder, s_.n, c.param));

    LedgerConfig cfg;
    cfg.committee = committee_;
    cfg.t = s_.t;
    cfg.max_parallel_mults = s_.max_parallel_mults;
    ledger_ = std::make_unique<Ledger>(cfg, reg_, load_fixture);
    for (Address p : committee_)
        ledger_->state().at(p).balance = s_.committee_balance;
    for (const auto& a : s_.accounts)
        ledger_->state().at(names_.at(a.name)).balance = a.balance;
    for (Address u : users_)
        ledger_->state().at(u).balance = 1'000'000'000;
    genesis_ = ledger_->state();

    NetConfig net;
    net.block_interval = s_.block_interval;
    net.latency = opt_.latency.value_or(s_.latency);
    net.block_capacity = s_.capacity;
    net.sync_mpc = s_.sync_mpc;
    net.seed = seed_;
    sim_ = std::make_unique<Simulator>(*ledger_, net, [this](const SessionStart& st) { return secrets_for(st); });
    sim_->set_trace(opt_.trace);
    for (const auto& f : s_.faults)
        sim_->inject({f.party, f.profile}, f.tick);

    tx_tickets_.assign(s_.txs.size(), 0);
    loop_ticket_.assign(s_.loops.size(), std::nullopt);
    for (const auto& c : s_.contracts)
        last_scripted_ = std::max(last_scripted_, c.block);
    for (const auto& x : s_.txs)
        last_scripted_ = std::max(last_scripted_, x.block);

    sim_->on_block([this](const CommittedBlock& b) { after_block(b); });
    submit_for(1);
    sim_->start();
    sim_->run_until([&] { return ledger_->height() >= s_.blocks || (s_.until_idle && idle()); },
        (s_.blocks + 1) * s_.block_interval);

    // ---- report ----
    RunOutcome out;
    out.capacity = s_.max_parallel_mults;
    out.t = s_.t;
    nlohmann::json& rep = out.report;
    rep["scenario"] = s_.name;
    rep["seed"] = seed_;
    rep["committee"] = {{"n", s_.n}, {"t", s_.t}};
    rep["latency"] = net.latency;
    rep["height"] = ledger_->height();

    std::map<Address, std::string> contract_names;
    for (const auto& c : s_.contracts)
        if (names_.contains(c.name))
            contract_names[names_.at(c.name)] = c.name;

    std::vector<const SessionRecord*> recs;
    for (const auto& [key, rec] : sim_->sessions())
        recs.push_back(&rec);
    std::stable_sort(recs.begin(), recs.end(), [](auto* a, auto* b) { return a->started < b->started; });
    std::map<std::string, std::vector<Word>> last_result;
    nlohmann::json sessions = nlohmann::json::array();
    for (const SessionRecord* rec : recs)
    {
        nlohmann::json j{{"contract", contract_names[rec->contract]}, {"tx", to_hex(rec->key.tx)},
            {"invocation", rec->key.invocation}, {"started", rec->started}};
        j["ended"] = rec->ended ? nlohmann::json(*rec->ended) : nlohmann::json(nullptr);
        j["result"] = rec->result ? words(*rec->result) : nlohmann::json(nullptr);
        if (rec->result)
            last_result[contract_names[rec->contract]] = *rec->result;
        auto spec = spec_of_.find(rec->key);
        std::optional<std::vector<Word>> want;
        if (spec != spec_of_.end())
        {
            j["oracle"] = spec->second->oracle;
            want = expected(*spec->second, *rec);
        }
        if (want && !rec->result)
        {
            // still running when the run stopped; transaction expectations catch real stalls
            j["expected"] = words(*want);
            j["verdict"] = "PENDING";
        }
        else if (want)
        {
            j["expected"] = words(*want);
            const bool ok = rec->result && *rec->result == *want;
            j["verdict"] = ok ? "PASS" : "FAIL";
            out.oracle_pass &= ok;
        }
        sessions.push_back(std::move(j));
    }
    rep["sessions"] = std::move(sessions);

    // meta-transaction outcomes, keyed by the suspended tx
    std::map<Hash32, bool> meta_reverted;
    for (const auto& block : ledger_->history())
        for (const auto& r : block.txs)
            if (r.receipt.meta_finished)
                meta_reverted[*r.receipt.meta_finished] = r.receipt.meta_reverted;
    nlohmann::json txs = nlohmann::json::array();
    for (std::size_t i = 0; i < s_.txs.size(); ++i)
    {
        const TxSpec& x = s_.txs[i];
        nlohmann::json j{{"label", x.label}, {"block", x.block}, {"method", x.method}};
        const auto* r = tx_tickets_[i] ? sim_->receipt(tx_tickets_[i]) : nullptr;
        std::string outcome = r ? status_name(r->second) : "pending";
        if (r)
        {
            j["included"] = r->first;
            j["status"] = to_string(r->second.status);
            j["denied_by_lock"] = r->second.denied_by_lock;
            j["error"] = to_string(r->second.error);
            if (r->second.status == TxStatus::suspended)
            {
                auto m = meta_reverted.find(r->second.tx_hash);
                outcome = m == meta_reverted.end() ? "suspended" : m->second ? "reverted_at_resume" : "completed";
            }
        }
        j["outcome"] = outcome;
        if (x.expect)
        {
            const bool ok = *x.expect == outcome;
            j["expect"] = *x.expect;
            j["verdict"] = ok ? "PASS" : "FAIL";
            out.oracle_pass &= ok;
        }
        txs.push_back(std::move(j));
    }
    rep["transactions"] = std::move(txs);

    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : s_.checks)
    {
        const Account* acc = names_.contains(c.contract) ? ledger_->state().find(names_.at(c.contract)) : nullptr;
        Word value = 0;
        if (acc)
            if (auto it = acc->storage.find(c.slot); it != acc->storage.end())
                value = it->second;
        std::optional<Word> want;
        if (const Word* w = std::get_if<Word>(&c.expect))
            want = *w;
        else if (const std::string& ref = std::get<std::string>(c.expect); ref.starts_with("oracle:"))
        {
            const std::size_t idx = std::stoul(ref.substr(7));
            if (auto it = last_result.find(c.contract); it != last_result.end() && idx < it->second.size())
                want = it->second[idx];
        }
        else if (ref.starts_with("oracle_party:"))
        {
            // the committee member whose index sits at that position
            const std::size_t idx = std::stoul(ref.substr(13));
            if (auto it = last_result.find(c.contract);
                it != last_result.end() && idx < it->second.size() && it->second[idx] < committee_.size())
                want = committee_[it->second[idx]].value;
        }
        else if (ref.starts_with("@") && names_.contains(ref.substr(1)))
            want = names_.at(ref.substr(1)).value;
        const bool ok = acc && want && value == *want;
        checks.push_back({{"label", c.label}, {"contract", c.contract}, {"slot", c.slot}, {"value", value},
            {"expected", want ? nlohmann::json(*want) : nlohmann::json(nullptr)}, {"verdict", ok ? "PASS" : "FAIL"}});
        out.oracle_pass &= ok;
    }
    rep["checks"] = std::move(checks);

    const SerialReplay replay = serial_replay(ledger_->config(), reg_, load_fixture, genesis_, *ledger_);
    out.state_hash = ledger_->state_hash();
    const bool serial_ok = replay.state_hash == out.state_hash;
    out.audit_pass = serial_ok && ledger_->audit_violations().empty();
    rep["audit"] = {{"accesses", ledger_->audited_accesses()}, {"violations", ledger_->audit_violations().size()},
        {"serial_state_hash", to_hex(replay.state_hash)}, {"serializable", serial_ok},
        {"verdict", out.audit_pass ? "PASS" : "FAIL"}};

    const std::uint64_t measure_to = s_.measure_to ? s_.measure_to : ledger_->height();
    std::map<std::uint64_t, std::size_t> per_block;
    for (const auto& [ticket, at] : workload_)
        if (const auto* r = sim_->receipt(ticket); r && r->second.status == TxStatus::success)
            ++per_block[r->first];
    nlohmann::json series = nlohmann::json::array(), live = nlohmann::json::array();
    for (const auto& st : sim_->stats())
    {
        if (st.height < s_.measure_from || st.height > measure_to)
            continue;
        out.regular_series.push_back(per_block[st.height]);
        out.live_series.push_back(st.live_sessions > 0);
        series.push_back(per_block[st.height]);
        live.push_back(st.live_sessions);
    }
    rep["throughput"] = {{"measure_from", s_.measure_from}, {"measure_to", measure_to},
        {"regular_per_block", std::move(series)}, {"live_sessions", std::move(live)},
        {"mean", mean_regular(out)}, {"sync_mpc", s_.sync_mpc}};

    out.queue_trace = ledger_->txmgr().queue().trace();
    std::size_t max_running = 0;
    std::map<std::string, std::size_t> kinds;
    for (const auto& e : out.queue_trace)
    {
        max_running = std::max(max_running, e.running);
        ++kinds[to_string(e.kind)];
    }
    rep["queue"] = {{"capacity", s_.max_parallel_mults}, {"max_running", max_running}, {"events", kinds}};
    out.history = ledger_->history();
    out.committee = committee_;
    out.trace_digest = sim_->trace_digest();
    rep["trace_digest"] = to_hex(out.trace_digest);
    rep["state_hash"] = to_hex(out.state_hash);
    rep["verdict"] = out.audit_pass && out.oracle_pass ? "PASS" : "FAIL";
    return out;
}
}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source)
{
    toml::table root;
    try
    {
        root = toml::parse(text, source);
    }
    catch (const toml::parse_error& e)
    {
        throw ScenarioInvalid{source + ":" + std::to_string(e.source().begin.line) + ": " +
                              std::string{e.description()}};
    }
    const Reader r{source};
    r.only(root,
        {"name", "seed", "blocks", "until_idle", "block_interval", "latency", "capacity", "max_parallel_mults",
            "sync_mpc", "measure_from", "measure_to", "committee", "accounts", "circuits", "contracts", "tx",
            "loop", "session", "workload", "check", "fault"},
        "scenario");
    Scenario s;
    s.name = r.str(root, "name", source);
    s.seed = r.u64(root, "seed", s.seed);
    s.blocks = r.u64(root, "blocks", s.blocks);
    s.until_idle = r.flag(root, "until_idle", s.until_idle);
    s.block_interval = r.u64(root, "block_interval", s.block_interval);
    s.latency = r.u64(root, "latency", s.latency);
    s.capacity = r.u64(root, "capacity", s.capacity);
    s.max_parallel_mults = r.u64(root, "max_parallel_mults", s.max_parallel_mults);
    s.sync_mpc = r.flag(root, "sync_mpc", s.sync_mpc);
    s.measure_from = r.u64(root, "measure_from", s.measure_from);
    s.measure_to = r.u64(root, "measure_to", s.measure_to);
    if (const toml::table* c = r.table(root, "committee"))
    {
        r.only(*c, {"n", "t", "balance"}, "[committee]");
        s.n = static_cast<std::uint32_t>(r.u64(*c, "n", s.n));
        s.t = static_cast<unsigned>(r.u64(*c, "t", s.t));
        s.committee_balance = r.u64(*c, "balance", s.committee_balance);
    }
    r.each(root, "accounts", [&](const toml::table& t) {
        r.only(t, {"name", "balance"}, "[[accounts]]");
        s.accounts.push_back({r.str(t, "name", {}, true), r.u64(t, "balance", 0)});
    });
    r.each(root, "circuits", [&](const toml::table& t) {
        r.only(t, {"name", "builder", "param"}, "[[circuits]]");
        s.circuits.push_back({r.str(t, "name", {}, true), r.str(t, "builder", {}, true),
            static_cast<std::uint32_t>(r.u64(t, "param", 0))});
    });
    r.each(root, "contracts", [&](const toml::table& t) {
        r.only(t, {"name", "fixture", "deployer", "args", "value", "block"}, "[[contracts]]");
        s.contracts.push_back({r.str(t, "name", {}, true), r.str(t, "fixture", {}, true),
            r.str(t, "deployer", {}, true), r.args(t, "args"), r.u64(t, "value", 0), r.u64(t, "block", 1)});
    });
    r.each(root, "tx", [&](const toml::table& t) {
        r.only(t, {"label", "block", "from", "to", "method", "args", "value", "expect"}, "[[tx]]");
        TxSpec x;
        x.label = r.str(t, "label");
        x.block = r.u64(t, "block", 1);
        x.from = r.str(t, "from", {}, true);
        x.to = r.str(t, "to", {}, true);
        x.method = r.str(t, "method");
        x.args = r.args(t, "args");
        x.value = r.u64(t, "value", 0);
        if (t.contains("expect"))
        {
            x.expect = r.str(t, "expect");
            static const std::set<std::string> known{
                "success", "reverted", "suspended", "denied", "invalid", "completed", "reverted_at_resume"};
            if (!known.contains(*x.expect))
                r.fail(t.get("expect"), "unknown expectation '" + *x.expect + "'");
        }
        s.txs.push_back(std::move(x));
    });
    r.each(root, "loop", [&](const toml::table& t) {
        r.only(t, {"from", "to", "method", "args", "from_block", "to_block"}, "[[loop]]");
        s.loops.push_back({r.str(t, "from", {}, true), r.str(t, "to", {}, true), r.str(t, "method", {}, true),
            r.args(t, "args"), r.u64(t, "from_block", 1), r.u64(t, "to_block", s.blocks)});
    });
    r.each(root, "session", [&](const toml::table& t) {
        r.only(t, {"contract", "circuit", "inputs", "oracle", "min_deposit", "repeat"}, "[[session]]");
        SessionSpec x;
        x.contract = r.str(t, "contract", {}, true);
        x.circuit = r.str(t, "circuit", {}, true);
        x.inputs = r.matrix(t, "inputs");
        x.oracle = r.str(t, "oracle", "none");
        static const std::set<std::string> known{"weighted_vote", "max_bid", "sum", "products", "cheater", "none"};
        if (!known.contains(x.oracle))
            r.fail(t.get("oracle"), "unknown oracle '" + x.oracle + "'");
        x.min_deposit = r.u64(t, "min_deposit", 0);
        x.repeat = r.flag(t, "repeat", false);
        s.sessions.push_back(std::move(x));
    });
    if (const toml::table* w = r.table(root, "workload"))
    {
        r.only(*w, {"per_block", "from_block", "to_block", "users", "max_amount"}, "[workload]");
        s.workload.per_block = r.u64(*w, "per_block", 0);
        s.workload.from_block = r.u64(*w, "from_block", 1);
        s.workload.to_block = r.u64(*w, "to_block", s.blocks);
        s.workload.users = static_cast<std::uint32_t>(r.u64(*w, "users", s.workload.users));
        s.workload.max_amount = r.u64(*w, "max_amount", s.workload.max_amount);
        if (s.workload.per_block && (s.workload.users < 2 || s.workload.max_amount == 0))
            r.fail(w, "workload needs at least two users and a positive max_amount");
    }
    r.each(root, "check", [&](const toml::table& t) {
        r.only(t, {"label", "contract", "slot", "expect"}, "[[check]]");
        const toml::node* e = t.get("expect");
        if (!e)
            r.fail(&t, "missing field 'expect'");
        s.checks.push_back({r.str(t, "label"), r.str(t, "contract", {}, true), r.u64(t, "slot", 0), r.arg(*e)});
    });
    r.each(root, "fault", [&](const toml::table& t) {
        r.only(t, {"party", "behavior", "activation", "tick"}, "[[fault]]");
        FaultEntry f;
        f.party = static_cast<std::uint32_t>(r.u64(t, "party", 0));
        try
        {
            f.profile.behavior = parse_fault_behavior(r.str(t, "behavior", {}, true));
            f.profile.activation = parse_fault_phase(r.str(t, "activation", "always"));
        }
        catch (const std::invalid_argument& e)
        {
            r.fail(&t, e.what());
        }
        f.tick = r.u64(t, "tick", 0);
        s.faults.push_back(f);
    });
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in)
        throw ScenarioInvalid{path.string() + ": cannot open"};
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

void validate(const Scenario& s)
{
    auto bad = [&](const std::string& what) { throw ScenarioInvalid{s.name + ": " + what}; };
    if (s.t == 0 || s.n < 3 * s.t + 1)
        bad("committee needs n >= 3t+1 with t >= 1");
    if (s.block_interval == 0 || s.latency >= s.block_interval)
        bad("latency must be below the block interval");
    if (s.max_parallel_mults == 0 || s.capacity == 0)
        bad("capacities must be positive");

    std::set<std::string> names;
    for (std::uint32_t i = 0; i < s.n; ++i)
        names.insert("party" + std::to_string(i));
    for (const auto& a : s.accounts)
        if (!names.insert(a.name).second)
            bad("duplicate name '" + a.name + "'");
    std::map<std::string, Circuit> circuits;
    for (const auto& c : s.circuits)
    {
        try
        {
            circuits.emplace(c.name, build_named_circuit(c.builder, s.n, c.param));
        }
        catch (const std::exception& e)
        {
            bad("circuit '" + c.name + "': " + e.what());
        }
    }
    for (const auto& c : s.contracts)
    {
        if (!load_fixture(c.fixture))
            bad("contract '" + c.name + "' uses unknown fixture '" + c.fixture + "'");
        if (!names.contains(c.deployer))
            bad("contract '" + c.name + "' deployer '" + c.deployer + "' is not an account");
        if (!names.insert(c.name).second)
            bad("duplicate name '" + c.name + "'");
    }
    auto known_ref = [&](const ArgRef& a) {
        const std::string* r = std::get_if<std::string>(&a);
        if (!r)
            return true;
        if (*r == "@committee")
            return true;
        if (r->starts_with("@"))
            return names.contains(r->substr(1));
        return r->starts_with("#") && circuits.contains(r->substr(1));
    };
    for (const auto& c : s.contracts)
        for (const auto& a : c.args)
            if (!known_ref(a))
                bad("contract '" + c.name + "' has an unresolvable argument");
    for (const auto& x : s.txs)
    {
        if (!names.contains(x.from) || !names.contains(x.to))
            bad("transaction '" + x.label + "' names an unknown account");
        for (const auto& a : x.args)
            if (!known_ref(a))
                bad("transaction '" + x.label + "' has an unresolvable argument");
    }
    for (const auto& l : s.loops)
        if (!names.contains(l.from) || !names.contains(l.to))
            bad("loop names an unknown account");
    for (const auto& x : s.sessions)
    {
        auto c = circuits.find(x.circuit);
        if (c == circuits.end())
            bad("session on '" + x.contract + "' names unknown circuit '" + x.circuit + "'");
        if (!names.contains(x.contract))
            bad("session names unknown contract '" + x.contract + "'");
        if (x.inputs.size() != s.n)
            bad("session on '" + x.contract + "' needs one input row per party");
        for (std::uint32_t p = 0; p < s.n; ++p)
            if (x.inputs[p].size() != c->second.secret_input_shape[p])
                bad("session on '" + x.contract + "': party " + std::to_string(p) + " input shape mismatch");
        for (const auto& g : c->second.gates)
            if (g.kind == GateKind::input_secret && x.inputs[g.party][g.slot] > g.max_value)
                bad("session on '" + x.contract + "': input of party " + std::to_string(g.party) + " out of range");
    }
    for (const auto& c : s.checks)
        if (!names.contains(c.contract))
            bad("check '" + c.label + "' names unknown contract");
    std::set<std::uint32_t> faulty;
    for (const auto& f : s.faults)
    {
        if (f.party >= s.n)
            bad("fault names party " + std::to_string(f.party) + " outside the committee");
        faulty.insert(f.party);
    }
    if (faulty.size() > s.t)
        bad("more faulty parties than t");
}

RunOutcome run_scenario(const Scenario& s, const RunOptions& options)
{
    validate(s);
    return Runner{s, options}.run();
}

double mean_regular(const RunOutcome& r)
{
    if (r.regular_series.empty())
        return 0;
    double sum = 0;
    for (auto v : r.regular_series)
        sum += static_cast<double>(v);
    return sum / static_cast<double>(r.regular_series.size());
}

double degradation(const RunOutcome& baseline, const RunOutcome& other)
{
    const double b = mean_regular(baseline);
    return b == 0 ? 0 : (b - mean_regular(other)) / b * 100.0;
}
}  // namespace mpcevm
