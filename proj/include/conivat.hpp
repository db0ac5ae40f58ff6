#pragma once

#include "conivat/clustering.hpp"
#include "conivat/constraints.hpp"
#include "conivat/data.hpp"
#include "conivat/dissimilarity.hpp"
#include "conivat/error.hpp"
#include "conivat/evaluation.hpp"
#include "conivat/jacobi.hpp"
#include "conivat/matrix.hpp"
#include "conivat/metric.hpp"
#include "conivat/rdi.hpp"
#include "conivat/rng.hpp"
#include "conivat/union_find.hpp"
#include "conivat/vat.hpp"
