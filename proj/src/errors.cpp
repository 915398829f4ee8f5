#include "asgmig/errors.hpp"

namespace asgmig {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::UnknownPath: return "UnknownPath";
    case ErrorCode::UnknownContext: return "UnknownContext";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::ForeignNotDeclaration: return "ForeignNotDeclaration";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotExportable: return "NotExportable";
    case ErrorCode::NoRuleFound: return "NoRuleFound";
    case ErrorCode::ScopeModelMismatch: return "ScopeModelMismatch";
    case ErrorCode::InvalidMapping: return "InvalidMapping";
    case ErrorCode::DuplicateMember: return "DuplicateMember";
    case ErrorCode::ChooserRequired: return "ChooserRequired";
    case ErrorCode::ChoiceAbandoned: return "ChoiceAbandoned";
    case ErrorCode::RuleApplicationFailed: return "RuleApplicationFailed";
    case ErrorCode::NotTopOfStack: return "NotTopOfStack";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::ScriptError: return "ScriptError";
  }
  return "Unknown";
}

}  // namespace asgmig
