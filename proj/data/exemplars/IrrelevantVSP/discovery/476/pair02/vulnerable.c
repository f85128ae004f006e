int flush(struct context *ctx)
{
    if (ctx->buf == NULL)
        return 0;
    write_all(ctx->fd, ctx->buf, ctx->used);
    ctx->used = 0;
    return 1;
}
