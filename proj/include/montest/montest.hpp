#pragma once

#include "montest/abp.hpp"
#include "montest/circuit.hpp"
#include "montest/circuit_io.hpp"
#include "montest/coeff_ring.hpp"
#include "montest/corpus.hpp"
#include "montest/derandomized.hpp"
#include "montest/errors.hpp"
#include "montest/eval.hpp"
#include "montest/expansion.hpp"
#include "montest/graph.hpp"
#include "montest/group_algebra.hpp"
#include "montest/group_vector.hpp"
#include "montest/phf.hpp"
#include "montest/randomized.hpp"
#include "montest/report.hpp"
#include "montest/rng.hpp"
#include "montest/structured.hpp"
#include "montest/structured_tester.hpp"
#include "montest/two_sat.hpp"
#include "montest/zp.hpp"
