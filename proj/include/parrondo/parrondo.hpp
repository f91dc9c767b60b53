#pragma once

#include "parrondo/bv_game.hpp"
#include "parrondo/error.hpp"
#include "parrondo/grover_game.hpp"
#include "parrondo/ring_games.hpp"
#include "parrondo/rng.hpp"
#include "parrondo/statevec.hpp"
