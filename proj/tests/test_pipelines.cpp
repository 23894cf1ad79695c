#include <gtest/gtest.h>

#include <cmath>

#include "imrec/error.hpp"
#include "imrec/phantom.hpp"
#include "imrec/pipelines.hpp"
#include "test_support.hpp"

using namespace imrec;
using imrec::testing::random_image;

namespace {

Image noisy_blocks(int side, double eta, std::uint64_t seed) {
  return add_gaussian_noise(phantom::blocks(side), {eta, seed});
}

}  // namespace

TEST(DenoiseExplicitTest, ConstantInputIsUntouched) {
  const Image b(32, 120.0);
  const PipelineReport r = denoise_explicit(b, StepPolicy::sd(), {1e-4, 100});
  EXPECT_EQ(r.output, b);
  ASSERT_EQ(r.stages.size(), 1u);
  EXPECT_EQ(r.stages[0].name, "denoise");
  EXPECT_EQ(r.stages[0].iterations(), 0);
}

TEST(DenoiseExplicitTest, ReducesNoise) {
  const Image truth = phantom::blocks(64);
  const Image b = add_gaussian_noise(truth, {10.0, 3});
  const PipelineReport r = denoise_explicit(b, StepPolicy::lsd(), {1e-3, 500});
  EXPECT_GT(psnr(r.output, truth), psnr(b, truth) + 3.0);
  EXPECT_EQ(r.total_iterations(), r.stages[0].iterations());
}

TEST(EstimateBetaTest, OneStepExpansion) {
  // m_bar = b - tau R_m(b): beta is tau |R_m(b)|^2 / <R_m(b), R_m(m_bar)> > 0.
  const Image b = noisy_blocks(32, 10.0, 1);
  const RegularizerSpec reg = RegularizerSpec::huber(adaptive_gamma(b));
  const Image rb = reg_gradient(b, reg);
  for (double tau : {1e-6, 1e-5, 1e-4}) {
    Image m_bar = b;
    m_bar.axpy(-tau, rb);
    const Image rm = reg_gradient(m_bar, reg);
    const double expected = tau * dot(rb, rb) / dot(rb, rm);
    const double beta = estimate_beta(m_bar, b, reg);
    EXPECT_GT(beta, 0.0);
    EXPECT_NEAR(beta, expected, 1e-8 * expected);
  }
}

TEST(EstimateBetaTest, PositiveAfterDescent) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Image b = noisy_blocks(32, 5.0 + 3.0 * static_cast<double>(seed), seed);
    const PipelineReport r = denoise_explicit(b, StepPolicy::sd(), {1e-300, 3});
    EXPECT_GT(estimate_beta(r.output, b), 0.0) << seed;
  }
}

TEST(EstimateBetaTest, Errors) {
  const Image b = noisy_blocks(16, 10.0, 2);
  const RegularizerSpec reg = RegularizerSpec::huber(adaptive_gamma(b));
  EXPECT_THROW(estimate_beta(b, b, reg), ZeroDenominatorError);
  // Anti-diffusion gives a negative ratio.
  Image sharpened = b;
  sharpened.axpy(1e-5, reg_gradient(b, reg));
  EXPECT_THROW(estimate_beta(sharpened, b, reg), ParameterError);
  EXPECT_THROW(estimate_beta(Image(8, 1.0), b, reg), DimensionError);
}

TEST(DenoiseHybridTest, ConstantInputShortCircuits) {
  const Image b(32, 50.0);
  const PipelineReport r = denoise_hybrid(b);
  EXPECT_EQ(r.output, b);
  ASSERT_EQ(r.stages.size(), 2u);
  EXPECT_EQ(r.stages[1].name, "irls");
  EXPECT_EQ(r.stages[1].status, "skipped");
  EXPECT_EQ(r.beta_used, 0.0);
}

TEST(DenoiseHybridTest, NoiseFreeFlag) {
  const Image b = noisy_blocks(32, 10.0, 4);
  HybridOptions o;
  o.noise_free = true;
  EXPECT_EQ(denoise_hybrid(b, o).output, b);
}

TEST(DenoiseHybridTest, StagesAndBeta) {
  const Image truth = phantom::blocks(64);
  const Image b = add_gaussian_noise(truth, {10.0, 5});
  const PipelineReport r = denoise_hybrid(b);
  ASSERT_EQ(r.stages.size(), 2u);
  EXPECT_EQ(r.stages[0].name, "denoise");
  EXPECT_EQ(r.stages[1].name, "irls");
  EXPECT_EQ(r.stages[1].iterations(), 3);
  EXPECT_GT(r.beta_used, 0.0);
  EXPECT_NEAR(r.beta_used, estimate_beta(r.stages[0].output, b), 1e-12 * r.beta_used);
  EXPECT_EQ(r.total_iterations(), r.stages[0].iterations() + 3);
  // The implicit stage can only lower T from its warm start.
  const ProblemSpec prob = ProblemSpec::tikhonov(b, std::nullopt, r.beta_used);
  EXPECT_LE(objective(r.output, prob), objective(r.stages[0].output, prob));
  EXPECT_THROW(denoise_hybrid(b, {StepPolicy::lsd(), 1.5}), ParameterError);
}

TEST(SharpenTukeyTest, TwoLevelImageIsFixedPoint) {
  const Image m = phantom::two_level(64, 30.0, 220.0);
  const PipelineReport r = sharpen_tukey(m, 10);
  EXPECT_EQ(r.output, m);
  EXPECT_EQ(r.stages[0].status, "zero-gradient");
}

TEST(SharpenTukeyTest, ZeroStepsIsSkipped) {
  const Image m = noisy_blocks(32, 5.0, 1);
  const PipelineReport r = sharpen_tukey(m, 0);
  EXPECT_EQ(r.output, m);
  EXPECT_EQ(r.stages[0].status, "skipped");
  EXPECT_THROW(sharpen_tukey(m, -1), ParameterError);
}

TEST(SharpenTukeyTest, RunsExactlyTheBudget) {
  const Image b = noisy_blocks(64, 10.0, 6);
  const PipelineReport pre = denoise_explicit(b, StepPolicy::lsd(), {1e-3, 200});
  const PipelineReport r = sharpen_tukey(pre.output, 10);
  EXPECT_EQ(r.stages[0].iterations(), 10);
  EXPECT_EQ(r.stages[0].status, "max-iterations");
}

TEST(DeblurTest, DeltaPsfNoiselessIsIdentity) {
  const Image b = phantom::blocks(32);
  const PipelineReport r = deblur(b, make_delta(), 1e-9, StepPolicy::lsd(), {1e-4, 50});
  EXPECT_LE(norm(r.output - b), 1e-6 * norm(b));
  EXPECT_EQ(r.beta_used, 1e-9);
  EXPECT_THROW(deblur(b, make_delta(), 0.0, StepPolicy::lsd(), {1e-4, 50}), ParameterError);
}

TEST(DeblurTest, ImprovesBlurredImage) {
  const Image truth = phantom::blocks(64);
  const PsfKernel psf = make_gaussian(7, 1.0);
  const Image b = forward_map(truth, embed(psf, 64));
  const PipelineReport r = deblur(b, psf, 1e-5, StepPolicy::lsd(), {1e-5, 300});
  EXPECT_GT(psnr(r.output, truth), psnr(b, truth) + 1.0);
}

TEST(RestoreSplitTest, StageOrderAndNoiseFree) {
  const Image truth = phantom::blocks(64);
  const PsfKernel psf = make_gaussian(7, 1.0);
  const Image b = add_gaussian_noise(forward_map(truth, embed(psf, 64)), {5.0, 2});
  const PipelineReport r = restore_split(b, psf, 5e-4);
  ASSERT_EQ(r.stages.size(), 3u);
  EXPECT_EQ(r.stages[0].name, "denoise");
  EXPECT_EQ(r.stages[1].name, "deblur");
  EXPECT_EQ(r.stages[2].name, "sharpen");
  EXPECT_EQ(r.stages[2].iterations(), 10);
  EXPECT_EQ(r.output, r.stages[2].output);
  EXPECT_EQ(r.total_iterations(),
            r.stages[0].iterations() + r.stages[1].iterations() + r.stages[2].iterations());

  SplitOptions o;
  o.noise_free = true;
  const PipelineReport clean = restore_split(b, psf, 5e-4, o);
  EXPECT_EQ(clean.stages[0].status, "skipped");
  EXPECT_EQ(clean.stages[0].iterations(), 0);
}
