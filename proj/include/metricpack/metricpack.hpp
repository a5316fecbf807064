#pragma once

// Exact analysis of finite metric spaces: covering and packing numbers,
// betweenness exponent, ultrametricity with witnesses, product metrics, and
// machine-checked verification suites.

#include "betweenness.hpp"
#include "cover_pack.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "products.hpp"
#include "report.hpp"
#include "space.hpp"
#include "subset_mask.hpp"
#include "suites.hpp"
#include "tolerance.hpp"
