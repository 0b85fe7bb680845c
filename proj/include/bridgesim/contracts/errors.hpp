#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bridgesim {

enum class Reason {
    MalformedPayload,
    InsufficientBalance,
    ZeroGaspriceNotExempt,
    AccessDenied,
    UnknownWitness,
    StaleRound,
    DuplicateVote,
    AlreadyExecuted,
    SubjectMismatch,
    AlreadyRegistered,
    RegistrationPending,
    NotRegistered,
    NoPendingRegistration,
    BelowEntranceFeeMinimum,
    FeeNotCovered,
    MultisigIncomplete,
    NotOwner,
    NonzeroBalance,
    AlreadySuicided,
    NotAuthorized,
    SafetyGateViolation,
    ExceedsCirculating,
    InsufficientUserBalance,
    ExceedsLocked,
    InsufficientLedgerBalance,
    AmountMismatch,
    InvalidReorg,
};

inline std::string_view to_string(Reason r)
{
    switch (r) {
    case Reason::MalformedPayload: return "malformed_payload";
    case Reason::InsufficientBalance: return "insufficient_balance";
    case Reason::ZeroGaspriceNotExempt: return "zero_gasprice_not_exempt";
    case Reason::AccessDenied: return "access_denied";
    case Reason::UnknownWitness: return "unknown_witness";
    case Reason::StaleRound: return "stale_round";
    case Reason::DuplicateVote: return "duplicate_vote";
    case Reason::AlreadyExecuted: return "already_executed";
    case Reason::SubjectMismatch: return "subject_mismatch";
    case Reason::AlreadyRegistered: return "already_registered";
    case Reason::RegistrationPending: return "registration_pending";
    case Reason::NotRegistered: return "not_registered";
    case Reason::NoPendingRegistration: return "no_pending_registration";
    case Reason::BelowEntranceFeeMinimum: return "below_entrance_fee_minimum";
    case Reason::FeeNotCovered: return "fee_not_covered";
    case Reason::MultisigIncomplete: return "multisig_incomplete";
    case Reason::NotOwner: return "not_owner";
    case Reason::NonzeroBalance: return "nonzero_balance";
    case Reason::AlreadySuicided: return "already_suicided";
    case Reason::NotAuthorized: return "not_authorized";
    case Reason::SafetyGateViolation: return "safety_gate_violation";
    case Reason::ExceedsCirculating: return "exceeds_circulating";
    case Reason::InsufficientUserBalance: return "insufficient_user_balance";
    case Reason::ExceedsLocked: return "exceeds_locked";
    case Reason::InsufficientLedgerBalance: return "insufficient_ledger_balance";
    case Reason::AmountMismatch: return "amount_mismatch";
    case Reason::InvalidReorg: return "invalid_reorg";
    }
    return "?";
}

/// Thrown by contract code to reject a transaction. The chain discards all
/// state changes of the rejected transaction and logs the reason.
class ContractError : public std::runtime_error {
public:
    explicit ContractError(Reason reason, std::string detail = {})
        : std::runtime_error(std::string(to_string(reason)) + (detail.empty() ? "" : ": " + detail)), reason_(reason)
    {
    }

    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

} // namespace bridgesim
