int port_of(const struct config *cfg)
{
    const struct server *srv = cfg->server;
    // cfg->server is NULL when no server section was parsed
    return srv->port;
}
