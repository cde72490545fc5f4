#ifndef MESOCAT_MESOCAT_HPP
#define MESOCAT_MESOCAT_HPP

#include "mesocat/coherent.hpp"
#include "mesocat/decoherence.hpp"
#include "mesocat/errors.hpp"
#include "mesocat/fock_oracle.hpp"
#include "mesocat/observables.hpp"
#include "mesocat/protocol.hpp"

#endif  // MESOCAT_MESOCAT_HPP
