#include "etr/family.hpp"

#include <algorithm>

namespace etr {

bool Family::in_domain(const Stage& s) const {
    return s.n < n_max && std::find(xs.begin(), xs.end(), s.x) != xs.end();
}

nlohmann::json Family::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const Stage& s : members) out.push_back({s.x, s.n});
    return out;
}

Family Family::from_json(const nlohmann::json& j, Order order, Natural n_max, std::vector<Code> xs) {
    Family f(std::move(order));
    f.n_max = n_max;
    f.xs = std::move(xs);
    if (!j.is_array()) throw ParseError("family must be a JSON array of [x, n] pairs");
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() || !item[1].is_number_unsigned())
            throw ParseError("family entry " + item.dump() + " is not an [x, n] pair");
        const Stage s{item[0].get<Code>(), item[1].get<Natural>()};
        if (!f.in_domain(s)) throw ParseError("family entry " + item.dump() + " lies outside the domain");
        f.members.insert(s);
    }
    for (Code x : f.xs)
        for (Natural n = 0; n < f.n_max; ++n) f.closure[{x, n}] = f.contains({x, n});
    return f;
}

}  // namespace etr
