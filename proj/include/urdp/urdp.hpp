#pragma once

// Umbrella header for the urdp library.

#include <urdp/big_uint.hpp>
#include <urdp/bit_string.hpp>
#include <urdp/bytes.hpp>
#include <urdp/error.hpp>
#include <urdp/game.hpp>
#include <urdp/lwe.hpp>
#include <urdp/padding.hpp>
#include <urdp/pke.hpp>
#include <urdp/random.hpp>
#include <urdp/scheme.hpp>
#include <urdp/xor_backend.hpp>
