#pragma once

#include <string>

#include "bridgesim/contracts/state.hpp"

namespace bridgesim {

/// Standing multisig action that lets a bridge head update the registry.
inline std::string authorize_updater_action(const Address& sc_a) { return "authorize_updater:" + sc_a.hex(); }

struct RegistryUpdate {
    ChainId chain_id;
    Address sc_a;
    Address creator_side;
    TokenAmount amount;
    std::uint64_t request_id = 0;
};

/// Appends `update.chain_id` if absent. Emits ExistOrNot with the outcome.
/// Requires the owners' multisig on `approval_action`.
inline bool sc_id_update(ExecContext& ctx, const Address& self, ScId& id, const RegistryUpdate& update,
                         const std::string& approval_action)
{
    if (!id.multisig.satisfied(approval_action)) {
        throw ContractError(Reason::MultisigIncomplete,
                            std::to_string(id.multisig.approvals(approval_action)) + " of " +
                                std::to_string(id.multisig.required()) + " approvals");
    }
    bool appended = !id.registry.contains(update.chain_id);
    if (appended) id.registry.chain_ids.push_back(update.chain_id);
    ctx.emit(self, ExistOrNotData{update.chain_id, appended, update.sc_a, update.creator_side, update.amount,
                                  update.request_id});
    return appended;
}

inline void sc_id_approve(ScId& id, const Address& owner, const MultisigAction& action)
{
    if (action.action.rfind("authorize_updater:", 0) != 0) throw ContractError(Reason::MalformedPayload, action.action);
    id.multisig.approve(owner, action.action);
}

} // namespace bridgesim
